"""Kazhdan-Lusztig polynomials for symmetric groups, with a persistent cache.

Polynomials are dense integer coefficient tuples (index = degree, no
trailing zeros).  P_{x,w} is computed column by column: for a fixed w
with right descent s and v = ws, every P_{x,w} for x <= w comes from
the column of v plus mu-coefficient correction columns.  The inner
column kernel exists twice -- a compiled Cython version and a pure
Python fallback -- selected at import time.
"""
from __future__ import annotations

import itertools
import os
import random

import numpy as np

from .perms import Perm, bruhat_leq, format_permutation, identity, length

Poly = tuple[int, ...]

__all__ = [
    "Poly",
    "poly_eval_one",
    "format_poly",
    "KLEngine",
    "KLCacheError",
    "get_engine",
    "set_engine",
    "backend_name",
    "invert_interval",
]

CACHE_VERSION = "ladderring klcache v1"
_MAX_COEFF_LEN = 16  # degree < 16 covers S_m for m <= 8 (bound (l(w0)-1)/2 = 13)


def poly_eval_one(p: Poly) -> int:
    return sum(p)


def format_poly(p: Poly) -> str:
    """Human form, ascending powers: () -> '0', (1, 1) -> '1 + q'."""
    if not p:
        return "0"
    terms = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            q = "q" if k == 1 else f"q^{k}"
            terms.append(q if c == 1 else f"{c}{q}")
    return " + ".join(terms)


# -- backend selection ---------------------------------------------------------

from . import _klpure

if os.environ.get("LADDERRING_PURE") == "1":
    _kernel = _klpure
else:
    try:
        from . import _klcore as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _klpure


def backend_name() -> str:
    return "compiled" if _kernel.__name__.endswith("_klcore") else "pure"


class _GroupState:
    """Indexed S_m with right-multiplication tables and KL column storage."""

    def __init__(self, m: int):
        self.m = m
        perms = list(itertools.permutations(range(1, m + 1)))
        self.perms = perms
        self.index = {w: i for i, w in enumerate(perms)}
        n = len(perms)
        self.lens = np.fromiter((length(w) for w in perms), dtype=np.int32, count=n)
        # rmult[x, i] = index of x * s_i (swap positions i, i+1)
        self.rmult = np.empty((n, max(m - 1, 1)), dtype=np.int32)
        for idx, w in enumerate(perms):
            lw = list(w)
            for i in range(m - 1):
                lw[i], lw[i + 1] = lw[i + 1], lw[i]
                self.rmult[idx, i] = self.index[tuple(lw)]
                lw[i], lw[i + 1] = lw[i + 1], lw[i]
        # interned polynomials
        self.coeffs = np.zeros((64, _MAX_COEFF_LEN), dtype=np.int64)
        self.nterms = np.zeros(64, dtype=np.int32)
        self.val1 = np.zeros(64, dtype=np.int64)
        self.npolys = 0
        self.pindex: dict[Poly, int] = {}
        self.intern((1,))
        # columns[w_idx] = (sorted int32 array of x_idx, int32 array of poly ids)
        self.columns: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        ident = self.index[identity(m)]
        self.columns[ident] = (np.array([ident], dtype=np.int32),
                               np.array([0], dtype=np.int32))
        self._mus: dict[int, list[tuple[int, int]]] = {}
        self.val1maps: dict[int, dict[int, int]] = {}
        self.scratch = np.zeros((n, _MAX_COEFF_LEN), dtype=np.int64)

    def intern(self, p: Poly) -> int:
        pid = self.pindex.get(p)
        if pid is not None:
            return pid
        pid = self.npolys
        if pid == len(self.nterms):
            grow = len(self.nterms) * 2
            self.coeffs = np.resize(self.coeffs, (grow, _MAX_COEFF_LEN))
            self.coeffs[pid:] = 0
            self.nterms = np.resize(self.nterms, grow)
            self.val1 = np.resize(self.val1, grow)
        self.coeffs[pid, :len(p)] = p
        self.nterms[pid] = len(p)
        self.val1[pid] = sum(p)
        self.pindex[p] = pid
        self.npolys += 1
        return pid

    def poly_of(self, pid: int) -> Poly:
        return tuple(int(c) for c in self.coeffs[pid, :self.nterms[pid]])

    def mus(self, v_idx: int) -> list[tuple[int, int]]:
        """All (z_idx, mu(z, v)) with nonzero mu, z < v."""
        got = self._mus.get(v_idx)
        if got is not None:
            return got
        xs, pids = self.columns[v_idx]
        lv = int(self.lens[v_idx])
        out = []
        for x, pid in zip(xs.tolist(), pids.tolist()):
            d = lv - int(self.lens[x])
            if d > 0 and d % 2 == 1 and self.nterms[pid] == (d - 1) // 2 + 1:
                out.append((x, int(self.coeffs[pid, (d - 1) // 2])))
        self._mus[v_idx] = out
        return out


class KLCacheError(ValueError):
    """Raised when a cache file cannot be used (bad version or corrupt)."""


class KLEngine:
    """Memoized KL polynomial engine over all S_m, m >= 1.

    Thread-unsafe by itself; in parallel sweeps each worker owns a
    (forked) engine, which keeps results bit-identical regardless of
    scheduling since the computation is a pure function of (x, w).
    """

    def __init__(self):
        self._groups: dict[int, _GroupState] = {}
        self.dirty = False

    def group(self, m: int) -> _GroupState:
        g = self._groups.get(m)
        if g is None:
            g = self._groups[m] = _GroupState(m)
        return g

    def _column(self, g: _GroupState, w_idx: int) -> tuple[np.ndarray, np.ndarray]:
        col = g.columns.get(w_idx)
        if col is not None:
            return col
        # find the first right descent
        w = g.perms[w_idx]
        i = next(i for i in range(g.m - 1) if w[i] > w[i + 1])
        v_idx = int(g.rmult[w_idx, i])
        xv, pv = self._column(g, v_idx)
        rmult_i = g.rmult[:, i]
        corrections = []
        for z_idx, mu in g.mus(v_idx):
            if g.lens[rmult_i[z_idx]] < g.lens[z_idx]:  # s is a right descent of z
                k = (int(g.lens[w_idx]) - int(g.lens[z_idx])) // 2
                zc = self._column(g, z_idx)
                corrections.append((mu, k, zc[0], zc[1]))
        col = _kernel.build_column(
            int(g.lens[w_idx]), g.lens, rmult_i, xv, pv, corrections,
            g.scratch, g.coeffs, g.nterms, g.intern)
        g.columns[w_idx] = col
        self.dirty = True
        return col

    # -- public queries ----------------------------------------------------

    def poly(self, x: Perm, w: Perm) -> Poly:
        """P_{x,w}; the zero polynomial () when x is not below w."""
        if len(x) != len(w):
            raise ValueError("length mismatch")
        if x == w:
            return (1,)
        g = self.group(len(w))
        xs, pids = self._column(g, g.index[w])
        pos = int(np.searchsorted(xs, g.index[x]))
        if pos < len(xs) and int(xs[pos]) == g.index[x]:
            return g.poly_of(int(pids[pos]))
        return ()

    def at_one(self, x: Perm, w: Perm) -> int:
        if x == w:
            return 1
        g = self.group(len(w))
        xs, pids = self._column(g, g.index[w])
        pos = int(np.searchsorted(xs, g.index[x]))
        if pos < len(xs) and int(xs[pos]) == g.index[x]:
            return int(g.val1[int(pids[pos])])
        return 0

    def at_one_by_index(self, g: _GroupState, x_idx: int, w_idx: int) -> int:
        xs, pids = self._column(g, w_idx)
        pos = int(np.searchsorted(xs, x_idx))
        if pos < len(xs) and int(xs[pos]) == x_idx:
            return int(g.val1[int(pids[pos])])
        return 0

    def column_val1_map(self, g: _GroupState, w_idx: int) -> dict[int, int]:
        """{x_idx: P_{x,w}(1)}, cached; for row-heavy expansion loops."""
        got = g.val1maps.get(w_idx)
        if got is None:
            xs, pids = self._column(g, w_idx)
            got = g.val1maps[w_idx] = dict(
                zip(xs.tolist(), g.val1[pids].tolist()))
        return got

    def column_at_one(self, w: Perm) -> dict[Perm, int]:
        """{x: P_{x,w}(1)} over all x <= w."""
        g = self.group(len(w))
        xs, pids = self._column(g, g.index[w])
        return {g.perms[int(x)]: int(g.val1[int(pid)])
                for x, pid in zip(xs, pids)}

    def warm(self, m: int) -> None:
        """Force the full S_m table."""
        g = self.group(m)
        for w_idx in range(len(g.perms)):
            self._column(g, w_idx)

    def stats(self) -> dict[int, tuple[int, int]]:
        return {m: (len(g.columns), sum(len(c[0]) for c in g.columns.values()))
                for m, g in self._groups.items()}

    # -- persistence ---------------------------------------------------------

    def save_cache(self, path: str, max_m: int = 6) -> None:
        """Write all computed columns for groups with m <= max_m.

        Line-oriented UTF-8: a version header, then one record per pair
        ``m <x one-line> <w one-line> <comma coefficients>``.
        """
        tmp = path + ".tmp"
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(f"# {CACHE_VERSION}\n")
            for m in sorted(self._groups):
                if m > max_m:
                    continue
                g = self._groups[m]
                for w_idx in sorted(g.columns):
                    wtxt = format_permutation(g.perms[w_idx])
                    xs, pids = g.columns[w_idx]
                    for x, pid in zip(xs.tolist(), pids.tolist()):
                        coefs = ",".join(
                            str(int(c)) for c in g.coeffs[pid, :g.nterms[pid]])
                        fh.write(f"{m} {format_permutation(g.perms[x])} {wtxt} {coefs}\n")
        os.replace(tmp, path)

    def load_cache(self, path: str, spot_checks: int = 20) -> None:
        """Load a cache file; rejects version mismatches, spot-checks entries."""
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != f"# {CACHE_VERSION}":
                raise KLCacheError(f"unsupported cache header {header!r}")
            by_col: dict[tuple[int, str], list[tuple[str, str]]] = {}
            for line in fh:
                parts = line.split()
                if len(parts) != 4:
                    raise KLCacheError(f"corrupt cache record {line!r}")
                m, xtxt, wtxt, coefs = parts
                by_col.setdefault((int(m), wtxt), []).append((xtxt, coefs))
        for (m, wtxt), rows in by_col.items():
            g = self.group(m)
            w_idx = g.index[_parse_cached_perm(wtxt, m)]
            xs = np.empty(len(rows), dtype=np.int32)
            pids = np.empty(len(rows), dtype=np.int32)
            for j, (xtxt, coefs) in enumerate(rows):
                xs[j] = g.index[_parse_cached_perm(xtxt, m)]
                pids[j] = g.intern(tuple(int(c) for c in coefs.split(",")))
            order = np.argsort(xs)
            g.columns[w_idx] = (np.ascontiguousarray(xs[order]),
                                np.ascontiguousarray(pids[order]))
        self._spot_check(spot_checks)
        self.dirty = False

    def _spot_check(self, count: int) -> None:
        """Recompute a sample of cached entries in a fresh engine."""
        rng = random.Random(0)
        fresh = KLEngine()
        probes = []
        for m, g in self._groups.items():
            cols = [w for w in g.columns if g.lens[w] <= 4]
            for w_idx in rng.sample(cols, min(len(cols), count)):
                xs, pids = g.columns[w_idx]
                j = rng.randrange(len(xs))
                probes.append((m, int(xs[j]), w_idx, g.poly_of(int(pids[j]))))
        for m, x_idx, w_idx, cached in probes:
            g = self._groups[m]
            if fresh.poly(g.perms[x_idx], g.perms[w_idx]) != cached:
                raise KLCacheError(
                    f"cache spot-check failed for m={m} "
                    f"x={g.perms[x_idx]} w={g.perms[w_idx]}")


_engine: KLEngine | None = None


def get_engine() -> KLEngine:
    global _engine
    if _engine is None:
        _engine = KLEngine()
    return _engine


def set_engine(engine: KLEngine | None) -> None:
    global _engine
    _engine = engine


def _parse_cached_perm(text: str, m: int) -> Perm:
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    return tuple(int(ch) for ch in text)


def invert_interval(lam: tuple[int, ...], mu: tuple[int, ...], x: Perm,
                    engine: KLEngine | None = None) -> dict[Perm, int]:
    """Coefficients c_{x,w} inverting {P_{x,w}(1)} over the poset S(lam, mu).

    c_{x,x} = 1 and sum_z c_{x,z} P_{z,w}(1) = delta_{x,w} for
    x <= w in S(lam, mu).  The values depend only on the permutations,
    not on (lam, mu); the coordinate pair fixes the poset to invert over.
    """
    from .perms import enumerate_S
    eng = engine or get_engine()
    S = enumerate_S(lam, mu)
    if x not in S:
        raise ValueError(f"{x} is not a longest double-coset representative here")
    above = sorted((w for w in S if bruhat_leq(x, w)), key=length)
    coeff: dict[Perm, int] = {}
    for w in above:
        if w == x:
            coeff[x] = 1
            continue
        total = 0
        for z in above:
            if z != w and z in coeff:
                v = eng.at_one(z, w)
                if v:
                    total += coeff[z] * v
        if total:
            coeff[w] = -total
    return coeff
