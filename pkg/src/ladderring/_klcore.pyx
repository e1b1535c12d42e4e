# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled KL column kernel; contract documented in `_klpure.build_column`."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def build_column(int lw,
                 cnp.int32_t[:] lens,
                 cnp.int32_t[:] rmult_i,
                 cnp.int32_t[:] xv,
                 cnp.int32_t[:] pv,
                 list corrections,
                 cnp.int64_t[:, :] scratch,
                 cnp.int64_t[:, :] coeffs,
                 cnp.int32_t[:] nterms,
                 intern):
    cdef Py_ssize_t nv = xv.shape[0]
    cdef Py_ssize_t ncap = scratch.shape[1]
    cdef Py_ssize_t i, j, pos, nt
    cdef int x, xs, pid, shift, mu, k
    cdef cnp.int32_t[:] xz
    cdef cnp.int32_t[:] pz

    # support of w = supp(v) union supp(v)*s, sorted unique
    supp_np = np.empty(2 * nv, dtype=np.int32)
    cdef cnp.int32_t[:] supp_view = supp_np
    for i in range(nv):
        supp_view[i] = xv[i]
        supp_view[nv + i] = rmult_i[xv[i]]
    supp_np = np.unique(supp_np)
    cdef cnp.int32_t[:] supp = supp_np
    cdef Py_ssize_t ns = supp.shape[0]

    # accumulate base terms: q^{1-c} P_{xs,v} + q^c P_{x,v} into scratch rows.
    # scratch rows are indexed by the perm index of x and assumed zero.
    for i in range(nv):
        x = xv[i]
        pid = pv[i]
        nt = nterms[pid]
        xs = rmult_i[x]
        # own term: row x gets q^{c} P_{x,v} with c = [xs < x];
        # partner term: row xs gets q^{1-c(xs)} P_{x,v}, and
        # 1 - c(xs) = [xs < x] as well, so both shifts coincide.
        shift = 1 if lens[xs] < lens[x] else 0
        for j in range(nt):
            scratch[x, j + shift] += coeffs[pid, j]
            scratch[xs, j + shift] += coeffs[pid, j]

    # mu corrections
    for corr in corrections:
        mu = corr[0]
        k = corr[1]
        xz = corr[2]
        pz = corr[3]
        for i in range(xz.shape[0]):
            x = xz[i]
            pid = pz[i]
            nt = nterms[pid]
            for j in range(nt):
                scratch[x, j + k] -= mu * coeffs[pid, j]

    # collect, intern, and reset scratch
    out_x = np.empty(ns, dtype=np.int32)
    out_p = np.empty(ns, dtype=np.int32)
    cdef cnp.int32_t[:] out_xv = out_x
    cdef cnp.int32_t[:] out_pv = out_p
    cdef Py_ssize_t n
    for pos in range(ns):
        x = supp[pos]
        n = ncap
        while n > 0 and scratch[x, n - 1] == 0:
            n -= 1
        if n == 0 or scratch[x, 0] != 1:
            raise AssertionError("KL column entry lost its constant term")
        if lens[x] == lw:
            if n != 1:
                raise AssertionError("P_{w,w} must be 1")
        elif 2 * (n - 1) > lw - lens[x] - 1:
            raise AssertionError("KL degree bound violated")
        row = tuple([scratch[x, j] for j in range(n)])
        out_xv[pos] = x
        out_pv[pos] = intern(row)
        for j in range(n):
            scratch[x, j] = 0
    return out_x, out_p
