"""Combinatorial Jacquet-module bookkeeping and indicator multiplicities.

For a ladder, the constituents of its maximal-parabolic Jacquet modules
are parameterized by strictly decreasing breakpoint tuples: enumerating
segments by decreasing end, each segment [b_j, e_j] splits at c_j
(b_j <= c_j <= e_j + 1) into a tail [c_j, e_j] on the left and a head
[b_j, c_j - 1] on the right, subject to c_1 > c_2 > ... > c_k.  Tails
sit in the left tensor factor throughout this module.

The indicator multiplicity of sigma in a product of two ladders is
computed by the recursion that peels sigma's minimal-begin block and
matches it against left parts via the two-column matcher, descending
into the right parts.  The result is 0 or 1; the theory guarantees the
branch sum never exceeds 1 and this is asserted, never clamped.
"""
from __future__ import annotations

import itertools
from collections import Counter
from typing import NamedTuple

from .segments import Multisegment, Segment, is_ladder, support

__all__ = ["JacquetPair", "jacquet_pairs_segment", "jacquet_pairs_ladder",
           "match_two_column", "indicator_multiplicity", "indicator_set",
           "indicator_multiplicity_standard"]


class JacquetPair(NamedTuple):
    left: Multisegment   # tails (segment suffixes)
    right: Multisegment  # heads (segment prefixes)


def jacquet_pairs_segment(d: Segment) -> list[JacquetPair]:
    """Breakpoint pairs of a single segment [a, b]: b - a + 2 of them.

    left = [c+1, b], right = [a, c] for c in {a-1, ..., b}; a trivial
    segment yields the single pair (empty, empty).
    """
    if d.trivial:
        return [JacquetPair(Multisegment(), Multisegment())]
    out = []
    for c in range(d.begin - 1, d.end + 1):
        left = [Segment(c + 1, d.end)] if c + 1 <= d.end else []
        right = [Segment(d.begin, c)] if d.begin <= c else []
        out.append(JacquetPair(Multisegment(left), Multisegment(right)))
    return out


def jacquet_pairs_ladder(m: Multisegment) -> list[JacquetPair]:
    """All (left, right) constituents of the Jacquet modules of a ladder.

    One pair per strictly decreasing breakpoint tuple within the boxes
    b_j <= c_j <= e_j + 1 (segments enumerated by decreasing end); both
    sides are ladders, supports conserve, and left parts are pairwise
    distinct across the list.
    """
    if not is_ladder(m):
        raise ValueError("jacquet_pairs_ladder expects a ladder")
    segs = sorted(m.entries, key=lambda s: -s.end)
    out: list[JacquetPair] = []

    def rec(j: int, bound: int | None, lefts: list[Segment], rights: list[Segment]):
        if j == len(segs):
            out.append(JacquetPair(Multisegment(lefts), Multisegment(rights)))
            return
        b, e = segs[j]
        hi = e + 1 if bound is None else min(e + 1, bound - 1)
        for c in range(b, hi + 1):
            nl = lefts + ([Segment(c, e)] if c <= e else [])
            nr = rights + ([Segment(b, c - 1)] if b <= c - 1 else [])
            rec(j + 1, c, nl, nr)

    rec(0, None, [], [])
    return out


def _block_profile(counts: Counter) -> tuple[Segment, Segment] | None:
    """Decode a support profile as supp(d) + supp(dhat) with d = [a, b],
    dhat = [a, c] (possibly trivial); None if the profile has no such shape."""
    if not counts:
        return None
    a, b = min(counts), max(counts)
    c = a - 1
    for p in range(a, b + 1):
        k = counts.get(p, 0)
        if k == 2 and c == p - 1:
            c = p
        elif k != 1:
            return None
    return Segment(a, b), Segment(a, c)


def match_two_column(d: Segment, dhat: Segment,
                     n1: Multisegment, n2: Multisegment) -> int:
    """1 iff L(d + dhat) occurs in L(n1) x L(n2), for generic ladders n1, n2.

    d = [a, b] nontrivial, dhat = [a, c] with a - 1 <= c <= b (trivial
    sentinel allowed).  Occurrence forces the alternating-breakpoint
    shape: one factor is the even tiles of a partition
    a = a_0 < a_1 < ... < a_l = b + 1 of [a, b] with a_1 > c + 1, the
    other is dhat plus the odd tiles.  When c = b the only possibility
    is n1 = n2 = {d}.  Genericity makes the multiplicity at most 1.
    """
    if d.trivial:
        raise ValueError("d must be nontrivial")
    if dhat.begin != d.begin or not (d.begin - 1 <= dhat.end <= d.end):
        raise ValueError("dhat must share d's begin and end inside d")
    target = support(Multisegment([d] + ([dhat] if not dhat.trivial else [])))
    if support(n1) + support(n2) != target:
        return 0
    if dhat == d:
        return 1 if n1 == n2 == Multisegment([d]) else 0
    c = dhat.end
    for n_even, n_odd in ((n1, n2), (n2, n1)):
        if not dhat.trivial:
            if dhat not in n_odd.entries:
                continue
            odd = n_odd.remove(dhat).entries
        else:
            odd = n_odd.entries
        even = n_even.entries
        pos = d.begin
        take_even, i_even, i_odd, first, ok = True, 0, 0, True, True
        while pos <= d.end:
            row, idx = (even, i_even) if take_even else (odd, i_odd)
            if idx >= len(row) or row[idx].begin != pos:
                ok = False
                break
            if first and row[idx].end <= c:  # first tile must pass the dhat end
                ok = False
                break
            first = False
            pos = row[idx].end + 1
            if take_even:
                i_even += 1
            else:
                i_odd += 1
            take_even = not take_even
        if ok and pos == d.end + 1 and i_even == len(even) and i_odd == len(odd):
            return 1
    return 0


def _norm_pair(m1: Multisegment, m2: Multisegment):
    """Translation-normalized, order-normalized key for a ladder pair."""
    pts = [m.min_point() for m in (m1, m2) if m]
    if not pts:
        return m1, m2, 0
    s = min(pts)
    a, b = sorted((m1.shift(-s), m2.shift(-s)))
    return a, b, s


# -- batch (set-valued) route ---------------------------------------------------
#
# The sweep-critical core works on plain tuples of (begin, end) pairs
# with supports packed into a single int: bits [0, _MASK_SHIFT) hold the
# points of multiplicity >= 1, the next _MASK_SHIFT bits those of
# multiplicity >= 2.  First-block profiles never exceed multiplicity 2,
# so Jacquet lefts with a triple-covered point can be dropped from the
# matching index outright.

_MASK_SHIFT = 24
_ONES = (1 << _MASK_SHIFT) - 1

Key = tuple[tuple[int, int], ...]

_iset_memo: dict[tuple[Key, Key], frozenset[Key]] = {}
_class_memo: dict[Key, dict[int, list[tuple[Key, Key]]]] = {}


def _support_mask(entries: Key) -> int | None:
    """Packed support mask, or None when some point is covered >= 3 times."""
    ones = twos = 0
    for b, e in entries:
        seg = ((1 << (e - b + 1)) - 1) << b
        if twos & seg:
            return None
        twos |= ones & seg
        ones |= seg
    return ones | (twos << _MASK_SHIFT)


def _jp_keys(key: Key) -> list[tuple[Key, Key]]:
    """(left, right) entry tuples over all breakpoint choices of a ladder."""
    segs = sorted(key, key=lambda s: -s[1])
    out: list[tuple[Key, Key]] = []

    def rec(j: int, bound: int | None, lefts: list, rights: list):
        if j == len(segs):
            out.append((tuple(sorted(lefts)), tuple(sorted(rights))))
            return
        b, e = segs[j]
        hi = e + 1 if bound is None else min(e + 1, bound - 1)
        for c in range(b, hi + 1):
            rec(j + 1, c,
                lefts + ([(c, e)] if c <= e else []),
                rights + ([(b, c - 1)] if b <= c - 1 else []))

    rec(0, None, [], [])
    return out


def _classes(key: Key) -> dict[int, list[tuple[Key, Key]]]:
    """Jacquet pairs grouped by packed left support (triple-covered
    lefts omitted; they cannot meet any first-block profile)."""
    got = _class_memo.get(key)
    if got is None:
        got = {}
        for lefts, rights in _jp_keys(key):
            mask = _support_mask(lefts)
            if mask is not None:
                got.setdefault(mask, []).append((lefts, rights))
        _class_memo[key] = got
    return got


def _tiles(b: int, c: int, n_even: Key, n_odd_full: Key) -> bool:
    """Alternating tiling of [0, b] by n_even/odd segments, odd side
    first stripped of the companion (0, c); first tile must end past c."""
    if c >= 0:
        try:
            i = n_odd_full.index((0, c))
        except ValueError:
            return False
        n_odd = n_odd_full[:i] + n_odd_full[i + 1:]
    else:
        n_odd = n_odd_full
    pos = 0
    ie = io = 0
    take_even = True
    first = True
    while pos <= b:
        row, idx = (n_even, ie) if take_even else (n_odd, io)
        if idx >= len(row) or row[idx][0] != pos:
            return False
        if first and row[idx][1] <= c:
            return False
        first = False
        pos = row[idx][1] + 1
        if take_even:
            ie += 1
        else:
            io += 1
        take_even = not take_even
    return pos == b + 1 and ie == len(n_even) and io == len(n_odd)


def _match_key(b: int, c: int, lefts1: Key, lefts2: Key) -> bool:
    """Occurrence of L([0,b] + [0,c]) in the product of the lefts, the
    combined support already known to equal the block profile."""
    if c == b:
        return lefts1 == lefts2 == ((0, b),)
    return _tiles(b, c, lefts1, lefts2) or _tiles(b, c, lefts2, lefts1)


def _norm_keys(k1: Key, k2: Key) -> tuple[Key, Key, int]:
    if not k1 and not k2:
        return k1, k2, 0
    lo = min(min(seg[0] for seg in k) for k in (k1, k2) if k)
    if lo:
        k1 = tuple((b - lo, e - lo) for b, e in k1)
        k2 = tuple((b - lo, e - lo) for b, e in k2)
    a, b = sorted((k1, k2))
    return a, b, lo


_ISET_MEMO_CAP = 1 << 18


def _iset(k1: Key, k2: Key) -> frozenset[Key]:
    n1, n2, lo = _norm_keys(k1, k2)
    got = _iset_memo.get((n1, n2))
    if got is None:
        got = _iset_norm(n1, n2)
        if len(_iset_memo) >= _ISET_MEMO_CAP:
            _iset_memo.clear()  # bounded memory over very long sweeps
        _iset_memo[(n1, n2)] = got
    if lo == 0:
        return got
    return frozenset(tuple((b + lo, e + lo) for b, e in sig) for sig in got)


def _iset_norm(k1: Key, k2: Key) -> frozenset[Key]:
    if not k1 and not k2:
        return frozenset([()])
    top = max(e for _, e in k1 + k2) + 1
    total0 = sum(1 for b, _ in k1 + k2 if b == 0)
    cls1 = list(_classes(k1).items())
    cls2 = _classes(k2)
    counts: dict[Key, int] = {}
    c_options: tuple[int, ...] = (-1,) if total0 == 1 else tuple(range(top))
    for b in range(top):
        pm1 = (1 << (b + 1)) - 1
        for c in c_options:
            if c > b:
                continue
            pm2 = ((1 << (c + 1)) - 1) if c >= 0 else 0
            block = ((0, b),) if c < 0 else tuple(sorted(((0, b), (0, c))))
            for s1key, pairs1 in cls1:
                o1 = s1key & _ONES
                t1 = s1key >> _MASK_SHIFT
                if o1 & ~pm1 or t1 & ~pm2:
                    continue  # s1 exceeds the profile somewhere
                d2 = pm2 & ~o1
                d1 = (pm1 & ~pm2 & ~o1) | (pm2 & ~t1)
                pairs2 = cls2.get(d1 | (d2 << _MASK_SHIFT))
                if not pairs2:
                    continue
                for lefts1, rights1 in pairs1:
                    for lefts2, rights2 in pairs2:
                        if not _match_key(b, c, lefts1, lefts2):
                            continue
                        for tail in _iset(rights1, rights2):
                            if tail and tail[0][0] == 0:
                                continue  # a third minimal-begin entry
                            sig = tuple(sorted(block + tail))
                            counts[sig] = counts.get(sig, 0) + 1
    bad = {k: v for k, v in counts.items() if v > 1}
    assert not bad, f"indicator branch sum exceeded 1: {bad}"
    return frozenset(counts)


def indicator_key_set(m1: Multisegment, m2: Multisegment) -> frozenset[Key]:
    """`indicator_set` with members as plain (begin, end) tuples."""
    if not (is_ladder(m1) and is_ladder(m2)):
        raise ValueError("indicator_set expects two ladders")
    return _iset(tuple(m1.entries), tuple(m2.entries))


def indicator_set(m1: Multisegment, m2: Multisegment) -> frozenset[Multisegment]:
    """All sigma with indicator multiplicity 1 in L(m1) x L(m2).

    Batch form of `indicator_multiplicity`: one pass over the Jacquet
    pair grid yields the entire set, and the per-sigma branch counts are
    still asserted to stay below 2.
    """
    return frozenset(Multisegment(Segment(b, e) for b, e in sig)
                     for sig in indicator_key_set(m1, m2))


def indicator_multiplicity(sigma: Multisegment, m1: Multisegment,
                           m2: Multisegment) -> int:
    """m(sigma_indicator, Jacquet module of L(m1) x L(m2)), in {0, 1}.

    Recursion: strip sigma's minimal-begin block (Delta and an optional
    same-begin companion), match it against left Jacquet parts of the
    ladders with the two-column matcher, recurse into right parts.
    Returns 0 outright if supports mismatch or three entries share the
    minimal begin.
    """
    if not (is_ladder(m1) and is_ladder(m2)):
        raise ValueError("indicator_multiplicity expects two ladders")
    if not sigma:
        return 1 if (not m1 and not m2) else 0
    if support(sigma) != support(m1 + m2):
        return 0
    return _indicator_rec(sigma, m1, m2)


_scalar_memo: dict[tuple, int] = {}


def _indicator_rec(sigma: Multisegment, m1: Multisegment, m2: Multisegment) -> int:
    if support(sigma) != support(m1 + m2):
        return 0
    if not sigma:
        return 1
    a, b, s = _norm_pair(m1, m2)
    key = (sigma.shift(-s) if s else sigma, a, b)
    got = _scalar_memo.get(key)
    if got is not None:
        return got
    bmin = sigma.min_point()
    shares = [seg for seg in sigma if seg.begin == bmin]
    if len(shares) >= 3:
        total = 0
    else:
        d = shares[-1]  # canonical order puts the larger end last
        dhat = shares[0] if len(shares) == 2 else Segment(bmin, bmin - 1)
        rest = sigma.remove(d, dhat)
        total = 0
        for p1, p2 in itertools.product(jacquet_pairs_ladder(m1),
                                        jacquet_pairs_ladder(m2)):
            hit = match_two_column(d, dhat, p1.left, p2.left)
            if hit:
                total += hit * _indicator_rec(rest, p1.right, p2.right)
        assert total <= 1, \
            f"indicator multiplicity exceeded 1 on {sigma}, {m1}, {m2}"
    if len(_scalar_memo) >= _ISET_MEMO_CAP:
        _scalar_memo.clear()
    _scalar_memo[key] = total
    return total


# -- standard-module variant ---------------------------------------------------


def _chain_partition(segs: tuple[Segment, ...], targets: list[Segment]) -> bool:
    """Whether segs split into len(targets) chains, each concatenating
    exactly to its target interval.  Small backtracking search."""

    def rec(i: int, tails: tuple[int, ...]) -> bool:
        if i == len(segs):
            return all(tails[t] == targets[t].end + 1 for t in range(len(targets)))
        b, e = segs[i]
        seen = set()  # chains with equal tail and equal target are symmetric
        for t in range(len(targets)):
            key = (tails[t], targets[t].end)
            if tails[t] == b and e <= targets[t].end and key not in seen:
                seen.add(key)
                if rec(i + 1, tails[:t] + (e + 1,) + tails[t + 1:]):
                    return True
        return False

    return rec(0, tuple(t.begin for t in targets))


def _match_segments(d: Segment, dhat: Segment, taus: tuple[Segment, ...]) -> int:
    """1 iff L(d + dhat) occurs in the product of the segment
    representations `taus`: the nontrivial taus must partition into two
    chains concatenating exactly to d and dhat."""
    block = Multisegment([d] + ([dhat] if not dhat.trivial else []))
    if support(Multisegment(taus)) != support(block):
        return 0
    targets = [d] + ([dhat] if not dhat.trivial else [])
    return 1 if _chain_partition(tuple(sorted(taus)), targets) else 0


_std_memo: dict[tuple, int] = {}


def indicator_multiplicity_standard(sigma: Multisegment,
                                    lam: tuple[int, ...],
                                    mu: tuple[int, ...],
                                    x) -> int:
    """m(sigma_indicator, Jacquet module of the standard module at
    (lam, mu, x)); a nonnegative integer.

    Same peeling recursion, with the factor list being the segments of
    the standard module (each contributing its own breakpoint options)
    and the matcher generalized to arbitrarily many segment factors.
    Only supports sigma whose begin-blocks have at most two entries.
    """
    from .perms import enumerate_S
    if x not in enumerate_S(lam, mu):
        raise ValueError("x is not a longest double-coset representative here")
    blocks = Counter(seg.begin for seg in sigma)
    if any(v > 2 for v in blocks.values()):
        raise ValueError("unsupported regime: an indicator block has >= 3 entries")
    factors = tuple(sorted(
        Segment(lam[i], mu[x[i] - 1]) for i in range(len(x))
        if lam[i] <= mu[x[i] - 1]))
    return _ind_std_rec(sigma, factors)


def _ind_std_rec(sigma: Multisegment, factors: tuple[Segment, ...]) -> int:
    if support(sigma) != support(Multisegment(factors)):
        return 0
    if not sigma:
        return 1
    pts = [seg.begin for seg in sigma]
    lo = min(min(pts), min((f.begin for f in factors), default=0))
    key = (tuple((b - lo, e - lo) for b, e in sigma.entries),
           tuple((f.begin - lo, f.end - lo) for f in factors))
    got = _std_memo.get(key)
    if got is not None:
        return got
    bmin = min(pts)
    shares = [seg for seg in sigma if seg.begin == bmin]
    assert len(shares) <= 2
    d = shares[-1]
    dhat = shares[0] if len(shares) == 2 else Segment(bmin, bmin - 1)
    rest = sigma.remove(d, dhat)
    need = support(Multisegment([d] + ([dhat] if not dhat.trivial else [])))
    options = [jacquet_pairs_segment(f) for f in factors]
    total = 0

    def rec(i: int, remaining: Counter, taus: list[Segment], rights: list[Segment]):
        nonlocal total
        if i == len(options):
            if any(remaining.values()):
                return
            if _match_segments(d, dhat, tuple(taus)):
                total += _ind_std_rec(Multisegment(rest.entries),
                                      tuple(sorted(rights)))
            return
        for left, right in options[i]:
            ls = left.entries[0] if left else None
            if ls is not None:
                if any(remaining.get(p, 0) <= 0 for p in ls.points()):
                    continue
                for p in ls.points():
                    remaining[p] -= 1
                taus.append(ls)
            if right:
                rights.append(right.entries[0])
            rec(i + 1, remaining, taus, rights)
            if ls is not None:
                for p in ls.points():
                    remaining[p] += 1
                taus.pop()
            if right:
                rights.pop()

    rec(0, Counter(need), [], [])
    if len(_std_memo) >= _ISET_MEMO_CAP:
        _std_memo.clear()
    _std_memo[key] = total
    return total
