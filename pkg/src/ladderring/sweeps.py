"""Batch verification sweeps over ladder pairs, and their instance spaces.

Instances are normalized by translation (minimal support point 0) and
bounded by a support window, which makes "exhaustive up to N segments"
finite.  Sweeps fan out over a worker pool; outputs are deterministic
functions of (scope, seed) regardless of worker count, because tasks
are enumerated in sorted order and merged in submission order.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .coords import build_multisegment, canonical_coordinates, combine
from .klengine import get_engine
from .perms import Perm, avoids, sign, star
from .segments import Multisegment, Segment

__all__ = [
    "enumerate_ladders", "enumerate_ladder_pairs", "random_ladder_pairs",
    "PairReport", "verify_pair", "identity_sum", "verify_identity_term",
    "smooth_pair_report", "census_counts", "run_tasks",
]


@lru_cache(maxsize=64)
def enumerate_ladders(window: int, k: int) -> tuple[Multisegment, ...]:
    """All ladders with k segments inside [0, window - 1], sorted."""
    pts = range(window)
    out = []
    for begins in itertools.combinations(pts, k):
        for ends in itertools.combinations(pts, k):
            if all(b <= e for b, e in zip(begins, ends)):
                out.append(Multisegment(
                    Segment(b, e) for b, e in zip(begins, ends)))
    return tuple(sorted(out))


def enumerate_ladder_pairs(max_total: int, window: int,
                           min_total: int = 2) -> Iterator[tuple[Multisegment, Multisegment]]:
    """Unordered ladder pairs, both factors nonempty, within the window,
    normalized so the joint minimal support point is 0; sorted order."""
    for total in range(min_total, max_total + 1):
        for k1 in range(1, total // 2 + 1):
            k2 = total - k1
            for m1 in enumerate_ladders(window, k1):
                for m2 in enumerate_ladders(window, k2):
                    if k1 == k2 and m2 < m1:
                        continue
                    if min(m1.min_point(), m2.min_point()) != 0:
                        continue
                    yield m1, m2


def random_ladder_pairs(total: int, window: int, count: int,
                        seed: int) -> list[tuple[Multisegment, Multisegment]]:
    """Seeded uniform sample over normalized ladder pairs with the given
    total segment count in the window (uniform over the raw pair space,
    shifted to minimal point 0)."""
    rng = random.Random(seed)
    shapes = []
    for k1 in range(1, total):
        k2 = total - k1
        if k2 < 1:
            continue
        n1, n2 = len(enumerate_ladders(window, k1)), len(enumerate_ladders(window, k2))
        if n1 and n2:
            shapes.append((k1, k2, n1 * n2))
    weights = [s[2] for s in shapes]
    out = []
    for _ in range(count):
        k1, k2, _n = rng.choices(shapes, weights=weights)[0]
        m1 = rng.choice(enumerate_ladders(window, k1))
        m2 = rng.choice(enumerate_ladders(window, k2))
        shift = -min(m1.min_point(), m2.min_point())
        out.append((m1.shift(shift), m2.shift(shift)))
    return out


# -- per-pair verification ------------------------------------------------------


@lru_cache(maxsize=1 << 13)
def _avoids321(w: Perm) -> bool:
    return avoids(w, (3, 2, 1))


@lru_cache(maxsize=1 << 13)
def _avoids3412(w: Perm) -> bool:
    return avoids(w, (3, 4, 1, 2))


class _System:
    """Per-(lam, mu) tables shared by every pair with these coordinates:
    the S(lam, mu) list, coset-table lookup, pattern flags, and lazily
    built KL expansion rows P_{x,.}(1) over S."""

    __slots__ = ("S", "index", "coset_index", "avoid321", "avoid3412",
                 "lam_runs", "mu_block_of", "_val1maps", "_rows", "lam", "mu")

    def __init__(self, lam: tuple[int, ...], mu: tuple[int, ...]):
        from .perms import blocks_of, enumerate_S_with_tables
        self.lam, self.mu = lam, mu
        self.S, tables = enumerate_S_with_tables(lam, mu)
        self.index = {w: i for i, w in enumerate(self.S)}
        self.coset_index = {t: i for i, t in enumerate(tables)}
        self.avoid321 = tuple(_avoids321(w) for w in self.S)
        self.avoid3412 = tuple(_avoids3412(w) for w in self.S)
        self.lam_runs = tuple(size for _, size in blocks_of(lam))
        mu_block_of: list[int] = []
        for j, (_, size) in enumerate(blocks_of(mu)):
            mu_block_of.extend([j] * size)
        self.mu_block_of = tuple(mu_block_of)
        self._val1maps: list[dict[int, int]] | None = None
        self._rows: dict[Perm, np.ndarray] = {}

    def table_of(self, wt: Perm) -> tuple:
        table = [[0] * (self.mu_block_of[-1] + 1) for _ in self.lam_runs]
        pos = 0
        mu_block_of = self.mu_block_of
        for i, size in enumerate(self.lam_runs):
            row = table[i]
            for _ in range(size):
                row[mu_block_of[wt[pos] - 1]] += 1
                pos += 1
        return tuple(map(tuple, table))

    def expand_row(self, x: Perm) -> np.ndarray:
        """P_{x,.}(1) over S in list order (int16)."""
        row = self._rows.get(x)
        if row is None:
            eng = get_engine()
            g = eng.group(len(x))
            if self._val1maps is None:
                self._val1maps = [eng.column_val1_map(g, g.index[w])
                                  for w in self.S]
            x_idx = g.index[x]
            row = np.fromiter((m.get(x_idx, 0) for m in self._val1maps),
                              dtype=np.int16, count=len(self.S))
            self._rows[x] = row
        return row


@lru_cache(maxsize=4096)
def _system(lam: tuple[int, ...], mu: tuple[int, ...]) -> _System:
    return _System(lam, mu)


def system_key(m1: Multisegment, m2: Multisegment):
    """Normalized merged coordinates; sorting tasks by this key keeps the
    per-system caches hot and lets workers share little."""
    lam = tuple(sorted([s.begin for s in m1] + [s.begin for s in m2]))
    mu = tuple(sorted([s.end for s in m1] + [s.end for s in m2]))
    return lam, mu


def sorted_by_system(pairs) -> list:
    return sorted(pairs, key=lambda p: (system_key(*p), p[0].entries, p[1].entries))


def _shift_pair(lam, mu):
    s = lam[0]
    return tuple(v - s for v in lam), tuple(v - s for v in mu), s


def _truth_vector(m1: Multisegment, m2: Multisegment):
    """Ground-truth multiplicities of [L(m1)][L(m2)] over S(lam, mu).

    The determinantal route: signs over the factors' Q sets, star
    interleavings identified with S(lam, mu) members through their
    double-coset contingency tables, KL expansion vectors summed."""
    from .decompose import _q_members
    from .perms import merge_parts
    l1, u1, y1 = canonical_coordinates(m1)
    l2, u2, y2 = canonical_coordinates(m2)
    lam, ip, jp = merge_parts(l1, l2)
    mu, iv, jv = merge_parts(u1, u2)
    nl, nm, s = _shift_pair(lam, mu)
    sys = _system(nl, nm)
    vec = np.zeros(len(sys.S), dtype=np.int64)
    q1 = _q_members(*_shift_pair(l1, u1)[:2])
    q2 = _q_members(*_shift_pair(l2, u2)[:2])
    for w1 in q1:
        s1 = sign(w1)
        for w2 in q2:
            wt = star(w1, w2, (ip, jp), (iv, jv))
            x = sys.S[sys.coset_index[sys.table_of(wt)]]
            vec += np.multiply(s1 * sign(w2), sys.expand_row(x),
                               dtype=np.int64)
    return lam, mu, nl, nm, sys, vec


class PairReport(NamedTuple):
    m1: str
    m2: str
    candidates: int
    factors: int
    disagreements: tuple[str, ...]
    multiplicity_violations: tuple[str, ...]
    width_violations: tuple[str, ...]
    pattern_violations: tuple[str, ...]

    @property
    def agree(self) -> bool:
        return not (self.disagreements or self.multiplicity_violations
                    or self.width_violations or self.pattern_violations)


def _sigma_key(nl, nm, w) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(
        (nl[i], nm[w[i] - 1]) for i in range(len(w)) if nl[i] <= nm[w[i] - 1]))


def _nested_chain_len(key) -> int:
    """Longest nested multichain among the entries = the width."""
    import bisect
    ends = [e for _, e in sorted(key, key=lambda s: (-s[0], s[1]))]
    tails: list[int] = []
    for e in ends:
        pos = bisect.bisect_right(tails, e)
        if pos == len(tails):
            tails.append(e)
        else:
            tails[pos] = e
    return len(tails)


def verify_pair(m1: Multisegment, m2: Multisegment) -> PairReport:
    """Compare the KL ground truth against the conjectural rule on one pair.

    For every w in S(lam, mu): ground-truth multiplicity must be 0/1
    (multiplicity one), constituents must have width <= 2 and avoid 321
    (width filtration and pattern bound), and truth == 1 must hold
    exactly when w avoids 321 and the indicator of its multisegment
    occurs in the Jacquet module of the product.
    """
    from .jacquet import indicator_key_set
    lam, mu, nl, nm, sys, vec = _truth_vector(m1, m2)
    iset = indicator_key_set(m1, m2)
    shift = lam[0] - nl[0]
    if shift:
        iset = frozenset(tuple((b - shift, e - shift) for b, e in sig)
                         for sig in iset)
    disagreements = []
    mult_bad = []
    width_bad = []
    patt_bad = []
    factors = 0
    for i, w in enumerate(sys.S):
        truth = int(vec[i])
        if truth:
            factors += 1
            if truth != 1:
                mult_bad.append(f"w={w} mult={truth}")
            if not sys.avoid321[i]:
                patt_bad.append(f"w={w} contains 321")
            key = _sigma_key(nl, nm, w)
            if _nested_chain_len(key) > 2:
                width_bad.append(f"w={w} width={_nested_chain_len(key)}")
            if not sys.avoid321[i] or key not in iset:
                disagreements.append(f"w={w} truth={truth} rule=0")
        elif sys.avoid321[i]:
            if _sigma_key(nl, nm, w) in iset:
                disagreements.append(f"w={w} truth=0 rule=1")
    return PairReport(str(m1), str(m2), len(sys.S), factors,
                      tuple(disagreements), tuple(mult_bad),
                      tuple(width_bad), tuple(patt_bad))


def smooth_pair_report(m1: Multisegment, m2: Multisegment) -> PairReport:
    """Check the proven smooth case on one pair.

    For every 321- and 3412-avoiding w in S(lam, mu): the indicator
    multiplicity equals the ground-truth multiplicity, and the
    indicator multiplicity in the full standard module stays <= 1.
    Keys containing 3412 are outside the scope and skipped.
    """
    from .jacquet import indicator_key_set, indicator_multiplicity_standard
    lam, mu, nl, nm, sys, vec = _truth_vector(m1, m2)
    iset = indicator_key_set(m1, m2)
    shift = lam[0] - nl[0]
    if shift:
        iset = frozenset(tuple((b - shift, e - shift) for b, e in sig)
                         for sig in iset)
    x = combine(m1, m2).x
    disagreements = []
    bound_bad = []
    checked = 0
    for i, w in enumerate(sys.S):
        if not (sys.avoid321[i] and sys.avoid3412[i]):
            continue
        checked += 1
        truth = int(vec[i])
        sigma = build_multisegment(nl, nm, w)
        ind = 1 if _sigma_key(nl, nm, w) in iset else 0
        if ind != truth:
            disagreements.append(f"w={w} truth={truth} indicator={ind}")
        istd = indicator_multiplicity_standard(sigma, nl, nm, x)
        if istd > 1:
            bound_bad.append(f"w={w} standard-module indicator {istd} > 1")
        elif istd < truth:
            bound_bad.append(f"w={w} standard-module indicator {istd} < truth {truth}")
    return PairReport(str(m1), str(m2), checked, int(np.count_nonzero(vec)),
                      tuple(disagreements), (), (), tuple(bound_bad))


# -- the KL-value identity over interleaved signed sums -------------------------


def identity_sum(z: Perm) -> int:
    """Signed sum of P at 1 over interleaved pairs below z.

    Partition positions and values of {1..n} into odds and evens; odds
    carry w2 in S_ceil(n/2), evens carry w1 in S_floor(n/2); sum
    sign(w1) sign(w2) P_{interleaved, z}(1) over interleavings <= z.
    Equals 1 for every 321-avoiding z (the conjecture's KL form).
    """
    eng = get_engine()
    n = len(z)
    odds = tuple(range(1, n + 1, 2))
    evens = tuple(range(2, n + 1, 2))
    total = 0
    for w2 in itertools.permutations(range(1, len(odds) + 1)):
        for w1 in itertools.permutations(range(1, len(evens) + 1)):
            wt = star(w2, w1, (odds, evens), (odds, evens))
            v = eng.at_one(wt, z)
            if v:
                total += sign(w1) * sign(w2) * v
    return total


def verify_identity_term(z: Perm) -> tuple[str, int, bool]:
    total = identity_sum(z)
    return ("".join(map(str, z)) if len(z) <= 9 else ",".join(map(str, z)),
            total, total == 1)


# -- censuses --------------------------------------------------------------------


def catalan(n: int) -> int:
    import math
    return math.comb(2 * n, n) // (n + 1)


def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def census_counts(n: int, with_kl: bool | None = None) -> dict:
    """Counts of 321-avoiders, {321,3412}-avoiders and smooth permutations.

    The first two are enumerated and cross-checked against the Catalan
    and Fibonacci closed forms; the smooth count is enumerated through
    the {3412, 4231} pattern criterion and, for n small enough for the
    KL engine (or when forced), cross-checked against P_{e,w}(1) = 1.
    """
    from .perms import enumerate_avoiders, identity
    n321 = sum(1 for _ in enumerate_avoiders(n, [(3, 2, 1)]))
    nfib = sum(1 for _ in enumerate_avoiders(n, [(3, 2, 1), (3, 4, 1, 2)]))
    nsmooth_patt = sum(1 for _ in enumerate_avoiders(n, [(3, 4, 1, 2), (4, 2, 3, 1)]))
    out = {
        "n": n,
        "avoid_321": n321,
        "catalan": catalan(n),
        "avoid_321_3412": nfib,
        "fibonacci": fibonacci(2 * n - 1) if n >= 1 else 1,
        "smooth_pattern": nsmooth_patt,
    }
    if with_kl is None:
        with_kl = n <= 6
    if with_kl:
        eng = get_engine()
        e = identity(n)
        out["smooth_kl"] = sum(
            1 for w in itertools.permutations(range(1, n + 1))
            if eng.at_one(e, w) == 1)
    return out


# -- worker-pool plumbing ---------------------------------------------------------


def clear_session_caches(drop_groups_above: int = 6) -> None:
    """Release the large sweep-scoped caches (between unrelated sweeps)."""
    from . import decompose, jacquet
    global _TASKS
    _TASKS = []
    _system.cache_clear()
    jacquet._iset_memo.clear()
    jacquet._scalar_memo.clear()
    jacquet._std_memo.clear()
    jacquet._class_memo.clear()
    decompose._expand_row_cached.cache_clear()
    decompose._coset_rep_cached.cache_clear()
    eng = get_engine()
    for m in [m for m in eng._groups if m > drop_groups_above]:
        del eng._groups[m]


def run_tasks(tasks: list, fn, workers: int, chunksize: int = 64) -> Iterator:
    """Map fn over tasks preserving order; fork-based pool when workers > 1.

    The parent should warm shared caches (KL columns) before calling so
    forked workers inherit them.
    """
    if workers <= 1:
        for t in tasks:
            yield fn(t)
        return
    import multiprocessing as mp
    ctx = mp.get_context("fork")
    with ctx.Pool(workers) as pool:
        yield from pool.imap(fn, tasks, chunksize=chunksize)


# Large pair sweeps keep one compactly encoded task list in the parent;
# forked workers address it by index ranges, so nothing but the ranges
# and the per-chunk reports crosses process boundaries.

_TASKS: list[bytes] = []
_WANT_ALL = False


def encode_pair(m1: Multisegment, m2: Multisegment) -> bytes:
    flat = [len(m1)]
    for seg in m1.entries + m2.entries:
        flat.append(seg.begin)
        flat.append(seg.end)
    return bytes(flat)


def decode_pair(buf: bytes) -> tuple[Multisegment, Multisegment]:
    k1 = buf[0]
    vals = list(buf[1:])
    segs = [Segment(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)]
    return Multisegment(segs[:k1]), Multisegment(segs[k1:])


def load_pair_tasks(pairs: Iterable[tuple[Multisegment, Multisegment]],
                    want_all_reports: bool = False) -> int:
    """Install the encoded, system-sorted task list; returns its size."""
    global _TASKS, _WANT_ALL
    _TASKS = [encode_pair(m1, m2) for m1, m2 in pairs]
    _WANT_ALL = want_all_reports
    return len(_TASKS)


def chunk_ranges(n: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]


def _sweep_chunk(bounds: tuple[int, int], check) -> tuple[int, list[PairReport]]:
    lo, hi = bounds
    kept: list[PairReport] = []
    for i in range(lo, hi):
        report = check(*decode_pair(_TASKS[i]))
        if _WANT_ALL or not report.agree:
            kept.append(report)
    return hi - lo, kept


def conjecture_chunk(bounds: tuple[int, int]) -> tuple[int, list[PairReport]]:
    return _sweep_chunk(bounds, verify_pair)


def smooth_chunk(bounds: tuple[int, int]) -> tuple[int, list[PairReport]]:
    return _sweep_chunk(bounds, smooth_pair_report)
