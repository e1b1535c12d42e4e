"""Pure-Python KL column kernel (fallback when the Cython core is absent).

Same contract as the compiled kernel in `_klcore.pyx`: given the column
of v = w*s and the mu-correction columns, produce the column of w.
"""
from __future__ import annotations

import numpy as np


def build_column(lw, lens, rmult_i, xv, pv, corrections, scratch, coeffs,
                 nterms, intern):
    """Compute {P_{x,w}}_{x <= w} from {P_{x,v}}_{x <= v}, v = ws < w.

    For each x in supp(w) = supp(v) union supp(v)*s, with xs = x*s:

        P_{x,w} = P_{xs,v} + q*P_{x,v}      if xs < x
                  q*P_{xs,v} + P_{x,v}      otherwise

    minus mu(z,v) * q^((l(w)-l(z))/2) * P_{x,z} for every correction
    column z (z < v, zs < z, mu(z,v) != 0).

    `scratch` is an all-zero (n!, D) workspace, returned to zero.
    Returns (sorted x indices, interned polynomial ids).
    """
    ncap = scratch.shape[1]
    xv_list = xv.tolist()
    pv_list = pv.tolist()
    vcol = dict(zip(xv_list, pv_list))
    supp = set(xv_list)
    supp.update(int(rmult_i[x]) for x in xv_list)
    supp = sorted(supp)

    acc = {}
    for x in supp:
        xs = int(rmult_i[x])
        pa = vcol.get(xs)
        pb = vcol.get(x)
        row = [0] * ncap
        shift_a, shift_b = (0, 1) if lens[xs] < lens[x] else (1, 0)
        if pa is not None:
            for j in range(nterms[pa]):
                row[j + shift_a] += int(coeffs[pa, j])
        if pb is not None:
            for j in range(nterms[pb]):
                row[j + shift_b] += int(coeffs[pb, j])
        acc[x] = row

    for mu, k, xz, pz in corrections:
        for x, pid in zip(xz.tolist(), pz.tolist()):
            row = acc[x]
            for j in range(nterms[pid]):
                row[j + k] -= mu * int(coeffs[pid, j])

    out_x = np.empty(len(supp), dtype=np.int32)
    out_p = np.empty(len(supp), dtype=np.int32)
    for pos, x in enumerate(supp):
        row = acc[x]
        n = ncap
        while n > 0 and row[n - 1] == 0:
            n -= 1
        assert n > 0 and row[0] == 1, "KL column entry lost its constant term"
        if lens[x] == lw:
            assert n == 1, "P_{w,w} must be 1"
        else:
            assert 2 * (n - 1) <= lw - int(lens[x]) - 1, "KL degree bound violated"
        out_x[pos] = x
        out_p[pos] = intern(tuple(row[:n]))
    return out_x, out_p
