"""Segments and multisegments on a single integer line.

A segment ``[a, b]`` is an integer interval; a multisegment is a finite
multiset of nontrivial segments kept in a canonical sort order.  These
are the labels of irreducible smooth GL_n representations on a fixed
supercuspidal line (identified with Z), and everything downstream --
widths, coordinates, products, Jacquet bookkeeping -- is built on them.
"""
from __future__ import annotations

import itertools
import re
from collections import Counter
from typing import Iterable, Iterator, NamedTuple

__all__ = [
    "Segment",
    "Multisegment",
    "precedes",
    "is_linked",
    "support",
    "is_ladder",
    "is_generic",
    "width",
    "min_ladder_cover",
    "indicator_shape",
    "parse_multisegment",
    "parse_segment",
]


class Segment(NamedTuple):
    """Integer interval [begin, end]; trivial (empty) iff end == begin - 1.

    Trivial segments may exist as sentinels inside algorithms but are
    never stored in a Multisegment.
    """

    begin: int
    end: int

    @property
    def trivial(self) -> bool:
        return self.end < self.begin

    @property
    def size(self) -> int:
        return self.end - self.begin + 1

    def points(self) -> range:
        return range(self.begin, self.end + 1)

    def contains(self, other: "Segment") -> bool:
        """Interval containment (other nested inside self)."""
        return self.begin <= other.begin and other.end <= self.end

    def __repr__(self) -> str:
        return f"[{self.begin},{self.end}]"


def _check(seg: Segment) -> Segment:
    if seg.begin > seg.end + 1:
        raise ValueError(f"malformed segment {seg.begin},{seg.end}: begin > end + 1")
    return seg


def precedes(d1: Segment, d2: Segment) -> bool:
    """True iff d1 precedes d2: b1 <= b2 - 1 <= e1 < e2.

    >>> precedes(Segment(0, 1), Segment(1, 2))
    True
    >>> precedes(Segment(0, 2), Segment(1, 1))
    False
    >>> precedes(Segment(0, 0), Segment(2, 3))
    False
    """
    return d1.begin <= d2.begin - 1 <= d1.end < d2.end


def is_linked(d1: Segment, d2: Segment) -> bool:
    return precedes(d1, d2) or precedes(d2, d1)


def strictly_below(d1: Segment, d2: Segment) -> bool:
    """Strict order generated by linkage: begins and ends both increase.

    Two distinct segments that are incomparable under this order (in
    either direction) are always nested.
    """
    return d1.begin < d2.begin and d1.end < d2.end


class Multisegment:
    """Finite multiset of nontrivial segments in canonical order.

    Canonical order is (begin, end) ascending, so equality of the sorted
    entry tuples decides equality of multisegments.  Instances are
    immutable and hashable.
    """

    __slots__ = ("entries", "_hash")

    def __init__(self, segments: Iterable[Segment | tuple[int, int]] = ()):
        entries = tuple(sorted(_check(Segment(*s)) for s in segments))
        for seg in entries:
            if seg.trivial:
                raise ValueError(f"trivial segment {seg} not storable in a multisegment")
        self.entries: tuple[Segment, ...] = entries
        self._hash = hash(entries)

    # -- container protocol -------------------------------------------------

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Multisegment) and self.entries == other.entries

    def __lt__(self, other: "Multisegment") -> bool:
        return self.entries < other.entries

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: "Multisegment") -> "Multisegment":
        return Multisegment(self.entries + other.entries)

    def remove(self, *segments: Segment) -> "Multisegment":
        """Multiset difference; trivial sentinels among the arguments are ignored."""
        entries = list(self.entries)
        for seg in segments:
            if not seg.trivial:
                entries.remove(seg)  # raises ValueError if absent
        return Multisegment(entries)

    def shift(self, s: int) -> "Multisegment":
        return Multisegment(Segment(b + s, e + s) for b, e in self.entries)

    def min_point(self) -> int:
        return min(seg.begin for seg in self.entries)

    def max_point(self) -> int:
        return max(seg.end for seg in self.entries)

    def size(self) -> int:
        """Total number of line points counted with multiplicity."""
        return sum(seg.size for seg in self.entries)

    # -- text format ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return "+".join(map(repr, self.entries))

    def __repr__(self) -> str:
        return f"Multisegment({self})"


_SEGMENT_RE = re.compile(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse_segment(text: str) -> Segment:
    m = _SEGMENT_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"malformed segment {text!r}: expected [a,b]")
    seg = Segment(int(m.group(1)), int(m.group(2)))
    if seg.trivial:
        raise ValueError(f"malformed segment {text!r}: need a <= b")
    return seg


def parse_multisegment(text: str) -> Multisegment:
    """Parse '+'-joined segments; '0' or '' denote the empty multisegment.

    >>> str(parse_multisegment(" [1,1] + [0,2] "))
    '[0,2]+[1,1]'
    """
    stripped = text.strip()
    if stripped in ("0", ""):
        return Multisegment()
    return Multisegment(parse_segment(part) for part in stripped.split("+"))


def support(m: Multisegment) -> Counter:
    """Multiplicity of each line point over the entries of m."""
    counts: Counter = Counter()
    for seg in m:
        counts.update(seg.points())
    return counts


def is_ladder(m: Multisegment) -> bool:
    """Begins and ends both strictly increasing in canonical order."""
    e = m.entries
    return all(e[i].begin < e[i + 1].begin and e[i].end < e[i + 1].end
               for i in range(len(e) - 1))


def is_generic(m: Multisegment) -> bool:
    """No pair of entries is linked."""
    return not any(is_linked(a, b) for a, b in itertools.combinations(m.entries, 2))


def _max_matching(adj: list[list[int]], n_right: int) -> list[int]:
    """Kuhn's augmenting-path matching; deterministic under list order.

    Returns match_left: for each left node the matched right node or -1.
    """
    match_left = [-1] * len(adj)
    match_right = [-1] * n_right

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] == -1 or augment(match_right[v], seen):
                    match_left[u] = v
                    match_right[v] = u
                    return True
        return False

    for u in range(len(adj)):
        augment(u, [False] * n_right)
    return match_left


def _cover_by_matching(m: Multisegment) -> list[Multisegment]:
    """Minimum chain cover of the entries under the strict linkage order."""
    entries = m.entries
    n = len(entries)
    adj = [[j for j in range(n) if strictly_below(entries[i], entries[j])]
           for i in range(n)]
    match_left = _max_matching(adj, n)
    successor = {i: v for i, v in enumerate(match_left) if v != -1}
    has_pred = set(successor.values())
    chains = []
    for i in range(n):
        if i in has_pred:
            continue
        chain = [entries[i]]
        j = i
        while j in successor:
            j = successor[j]
            chain.append(entries[j])
        chains.append(Multisegment(chain))
    return chains


def _longest_nested_chain(m: Multisegment) -> int:
    """Longest multichain of nested entries (equal segments allowed).

    Sorting by (begin desc, end asc), nested chains are exactly the
    weakly increasing subsequences of the end values.
    """
    ends = [seg.end for seg in sorted(m.entries, key=lambda s: (-s.begin, s.end))]
    tails: list[int] = []  # tails[k] = smallest possible tail of a chain of length k+1
    import bisect
    for e in ends:
        pos = bisect.bisect_right(tails, e)
        if pos == len(tails):
            tails.append(e)
        else:
            tails[pos] = e
    return len(tails)


def width(m: Multisegment) -> int:
    """Minimal number of ladders covering m.

    Computed as a minimum chain cover via bipartite matching and
    cross-checked against the dual description (longest nested
    multichain); a mismatch would contradict Dilworth's theorem and
    aborts.
    """
    if not m:
        return 0
    if __debug__:
        # entries incomparable in the chain order must be nested
        for a, b in itertools.combinations(m.entries, 2):
            if not (strictly_below(a, b) or strictly_below(b, a)):
                assert a.contains(b) or b.contains(a), (a, b)
    cover = _cover_by_matching(m)
    nested = _longest_nested_chain(m)
    if len(cover) != nested:
        raise AssertionError(
            f"Dilworth violation on {m}: cover {len(cover)} != antichain {nested}")
    return nested


def min_ladder_cover(m: Multisegment) -> list[Multisegment]:
    """A cover of m by exactly width(m) ladders (deterministic)."""
    if not m:
        return []
    cover = _cover_by_matching(m)
    assert len(cover) == _longest_nested_chain(m)
    assert all(is_ladder(c) for c in cover)
    return cover


def indicator_shape(m: Multisegment) -> list[Multisegment]:
    """Blocks of entries grouped by begin value, ordered by begin.

    Each block is generic since its entries share a begin.  The tensor
    product of the blocks is the indicator of L(m).
    """
    if not m:
        raise ValueError("empty multisegment has no indicator")
    blocks = []
    for _, group in itertools.groupby(m.entries, key=lambda s: s.begin):
        blocks.append(Multisegment(group))
    return blocks
