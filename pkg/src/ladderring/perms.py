"""Symmetric group combinatorics: Bruhat order, patterns, double cosets.

Permutations are plain tuples of 1-indexed images (one-line notation).
Block structures are weakly increasing integer tuples; the parabolic
subgroup attached to one is generated by the adjacent transpositions
inside its constant blocks.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator

Perm = tuple[int, ...]

__all__ = [
    "Perm",
    "identity",
    "inverse",
    "length",
    "sign",
    "compose",
    "bruhat_leq",
    "contains_pattern",
    "avoids",
    "in_Q",
    "is_max_double_coset",
    "longest_double_coset_rep",
    "star",
    "star_longest",
    "flatten",
    "enumerate_avoiders",
    "enumerate_S",
    "merge_parts",
    "parse_permutation",
    "format_permutation",
]


def identity(m: int) -> Perm:
    return tuple(range(1, m + 1))


def inverse(w: Perm) -> Perm:
    out = [0] * len(w)
    for i, v in enumerate(w):
        out[v - 1] = i + 1
    return tuple(out)


def length(w: Perm) -> int:
    """Inversion count."""
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def sign(w: Perm) -> int:
    return -1 if length(w) % 2 else 1


def compose(w: Perm, v: Perm) -> Perm:
    """(w . v)(i) = w(v(i))."""
    return tuple(w[v[i] - 1] for i in range(len(w)))


def bruhat_leq(x: Perm, w: Perm) -> bool:
    """Bruhat order via rank-matrix dominance.

    x <= w iff for all i, j: #{i' <= i : x(i') >= j} <= #{i' <= i : w(i') >= j}.
    Equivalently the descending sorts of every prefix are dominated
    entrywise.

    >>> bruhat_leq((3, 1, 2), (3, 2, 1))
    True
    >>> bruhat_leq((2, 3, 1), (3, 1, 2)), bruhat_leq((3, 1, 2), (2, 3, 1))
    (False, False)
    """
    n = len(x)
    if len(w) != n:
        raise ValueError("length mismatch in Bruhat comparison")
    for i in range(1, n):
        xs = sorted(x[:i], reverse=True)
        ws = sorted(w[:i], reverse=True)
        if any(a > b for a, b in zip(xs, ws)):
            return False
    return True


def _flatten_word(values: tuple[int, ...]) -> Perm:
    order = sorted(range(len(values)), key=values.__getitem__)
    out = [0] * len(values)
    for rank, idx in enumerate(order):
        out[idx] = rank + 1
    return tuple(out)


def contains_pattern(w: Perm, p: Perm) -> bool:
    """True iff some subsequence of w is order-isomorphic to p.

    Plain subsequence scan over increasing positions, pruning any prefix
    whose relative order already deviates from p; fine for the window
    sizes (<= ~12) this engine works at.
    """
    k = len(p)
    if k > len(w):
        return False

    def extend(start: int, chosen: list[int]) -> bool:
        j = len(chosen)
        if j == k:
            return True
        for i in range(start, len(w) - (k - j) + 1):
            v = w[i]
            if all((c < v) == (p[t] < p[j]) for t, c in enumerate(chosen)):
                chosen.append(v)
                if extend(i + 1, chosen):
                    return True
                chosen.pop()
        return False

    return extend(0, [])


def avoids(w: Perm, *patterns: Perm) -> bool:
    return not any(contains_pattern(w, p) for p in patterns)


def flatten(w: Perm, remove_positions: set[int] | frozenset[int]) -> Perm:
    """Delete entries (i, w(i)) for i in remove_positions (1-indexed), relabel.

    >>> flatten((3, 4, 1, 2), {1})
    (3, 1, 2)
    """
    kept = tuple(w[i] for i in range(len(w)) if (i + 1) not in remove_positions)
    return _flatten_word(kept)


def enumerate_avoiders(m: int, patterns: list[Perm]) -> Iterator[Perm]:
    """All w in S_m avoiding every pattern, lexicographic, pruned on prefixes."""
    if m == 0:
        yield ()
        return

    def prefix_hits(prefix: tuple[int, ...]) -> bool:
        word = _flatten_word(prefix)
        return any(contains_pattern(word, p) for p in patterns)

    def rec(prefix: tuple[int, ...], rest: list[int]) -> Iterator[Perm]:
        if not rest:
            yield prefix
            return
        for i, v in enumerate(rest):
            cand = prefix + (v,)
            if not prefix_hits(cand):
                yield from rec(cand, rest[:i] + rest[i + 1:])

    yield from rec((), list(range(1, m + 1)))


# -- block structures and double cosets ---------------------------------------


def in_Q(w: Perm, lam: tuple[int, ...], mu: tuple[int, ...]) -> bool:
    """Whether the coordinate triple (lam, mu, w) defines a multisegment:
    lam_i <= mu_{w(i)} + 1 for all i."""
    if not (len(w) == len(lam) == len(mu)):
        raise ValueError("length mismatch")
    return all(lam[i] <= mu[w[i] - 1] + 1 for i in range(len(w)))


def is_max_double_coset(w: Perm, lam: tuple[int, ...], mu: tuple[int, ...]) -> bool:
    """Whether w is the longest element of its S^mu - S^lam double coset.

    Characterized by descents on every adjacent pair inside a lam-block
    (positions) and inside a mu-block (values).
    """
    n = len(w)
    wi = inverse(w)
    for i in range(n - 1):
        if lam[i] == lam[i + 1] and w[i] < w[i + 1]:
            return False
        if mu[i] == mu[i + 1] and wi[i] < wi[i + 1]:
            return False
    return True


def longest_double_coset_rep(w: Perm, lam: tuple[int, ...],
                             mu: tuple[int, ...]) -> Perm:
    """The unique Bruhat-maximal element of S^mu w S^lam.

    Greedy fixed point: apply length-increasing simple transpositions
    from S^lam on the right and S^mu on the left until none applies.
    Each pass sorts positions inside lam-blocks descending by value and
    values inside mu-blocks descending by position.
    """
    images = list(w)
    n = len(w)
    while True:
        changed = False
        for i in range(n - 1):
            if lam[i] == lam[i + 1] and images[i] < images[i + 1]:
                images[i], images[i + 1] = images[i + 1], images[i]
                changed = True
        wi = list(inverse(tuple(images)))
        for j in range(n - 1):
            if mu[j] == mu[j + 1] and wi[j] < wi[j + 1]:
                wi[j], wi[j + 1] = wi[j + 1], wi[j]
                changed = True
        images = list(inverse(tuple(wi)))
        if not changed:
            return tuple(images)


def star(w1: Perm, w2: Perm,
         pos_parts: tuple[tuple[int, ...], tuple[int, ...]],
         val_parts: tuple[tuple[int, ...], tuple[int, ...]]) -> Perm:
    """Interleave w1 on (I positions -> I values) with w2 on (J -> J).

    pos_parts = (I_pos, J_pos) and val_parts = (I_val, J_val) partition
    {1..m} with |I_pos| = |I_val| = len(w1); all parts sorted ascending.
    """
    (ip, jp), (iv, jv) = pos_parts, val_parts
    if not (len(ip) == len(iv) == len(w1) and len(jp) == len(jv) == len(w2)):
        raise ValueError("partition sizes do not match the factors")
    out = [0] * (len(w1) + len(w2))
    for t, p in enumerate(ip):
        out[p - 1] = iv[w1[t] - 1]
    for s, p in enumerate(jp):
        out[p - 1] = jv[w2[s] - 1]
    return tuple(out)


def star_longest(w1: Perm, w2: Perm, pos_parts, val_parts,
                 lam: tuple[int, ...], mu: tuple[int, ...]) -> Perm:
    return longest_double_coset_rep(star(w1, w2, pos_parts, val_parts), lam, mu)


def merge_parts(t1: tuple[int, ...], t2: tuple[int, ...]):
    """Stable merge of two weakly increasing tuples, first-factor entries
    first among equal values.  Returns (merged, positions of t1 entries,
    positions of t2 entries), positions 1-indexed ascending."""
    merged: list[int] = []
    pos1: list[int] = []
    pos2: list[int] = []
    i = j = 0
    while i < len(t1) or j < len(t2):
        if j >= len(t2) or (i < len(t1) and t1[i] <= t2[j]):
            merged.append(t1[i])
            pos1.append(len(merged))
            i += 1
        else:
            merged.append(t2[j])
            pos2.append(len(merged))
            j += 1
    return tuple(merged), tuple(pos1), tuple(pos2)


def blocks_of(t: tuple[int, ...]) -> list[tuple[int, int]]:
    """Maximal constant runs of a weakly increasing tuple as (value, size)."""
    out = []
    i = 0
    while i < len(t):
        j = i
        while j + 1 < len(t) and t[j + 1] == t[i]:
            j += 1
        out.append((t[i], j - i + 1))
        i = j + 1
    return out


def coset_table(w: Perm, lam: tuple[int, ...], mu: tuple[int, ...]) -> tuple:
    """Contingency table of w: entry (i, j) counts positions in the i-th
    lam-block sent into the j-th mu-block.  Double cosets correspond
    one-to-one to tables with the block sizes as margins."""
    lb = blocks_of(lam)
    mb = blocks_of(mu)
    mu_block_of = []
    for j, (_, size) in enumerate(mb):
        mu_block_of.extend([j] * size)
    table = [[0] * len(mb) for _ in lb]
    pos = 0
    for i, (_, size) in enumerate(lb):
        for _ in range(size):
            table[i][mu_block_of[w[pos] - 1]] += 1
            pos += 1
    return tuple(map(tuple, table))


def _rep_from_table(table, lb, mb) -> Perm:
    """The longest double-coset representative with the given table.

    Each mu-block hands its values out from the top to lam-blocks in
    increasing order; inside a lam-block the collected values are laid
    out in decreasing order.  This realizes all descents inside both
    kinds of blocks at once.
    """
    p, q = len(lb), len(mb)
    tops = []
    v = 1
    for _, size in mb:
        tops.append(v + size - 1)
        v += size
    next_val = list(tops)
    per_block: list[list[int]] = [[] for _ in range(p)]
    for i in range(p):
        for j in range(q):
            for _ in range(table[i][j]):
                per_block[i].append(next_val[j])
                next_val[j] -= 1
    images: list[int] = []
    for i in range(p):
        images.extend(sorted(per_block[i], reverse=True))
    return tuple(images)


@lru_cache(maxsize=1 << 16)
def _enumerate_S_cached(lam: tuple[int, ...], mu: tuple[int, ...]):
    """Longest coset representatives in Q together with their tables,
    via contingency tables with the forbidden cells
    lam_value > mu_value + 1 left empty."""
    lb = blocks_of(lam)
    mb = blocks_of(mu)
    p, q = len(lb), len(mb)
    allowed = [[lb[i][0] <= mb[j][0] + 1 for j in range(q)] for i in range(p)]
    # lam block values ascend, so the rows allowed to feed a column form
    # a prefix; once the last allowed row passes, the column must be full.
    last_row = [max((i for i in range(p) if allowed[i][j]), default=-1)
                for j in range(q)]
    colrem = [size for _, size in mb]
    table: list[tuple[int, ...]] = []
    out: list[tuple[Perm, tuple]] = []

    def fill_row(i: int, j: int, left: int, row: list[int]):
        if j == q:
            if left == 0:
                table.append(tuple(row))
                dfs(i + 1)
                table.pop()
            return
        if not allowed[i][j]:
            if colrem[j] and last_row[j] < i:
                return  # a column nobody can fill anymore
            row[j] = 0
            fill_row(i, j + 1, left, row)
            return
        if last_row[j] == i:
            take = colrem[j]  # forced: last chance to fill the column
            if take > left:
                return
            row[j] = take
            colrem[j] = 0
            fill_row(i, j + 1, left - take, row)
            colrem[j] = take
            row[j] = 0
            return
        hi = min(left, colrem[j])
        for take in range(hi + 1):
            row[j] = take
            colrem[j] -= take
            fill_row(i, j + 1, left - take, row)
            colrem[j] += take
        row[j] = 0

    def dfs(i: int):
        if i == p:
            out.append((_rep_from_table(table, lb, mb), tuple(table)))
            return
        fill_row(i, 0, lb[i][1], [0] * q)

    dfs(0)
    out.sort()
    return tuple(w for w, _ in out), tuple(t for _, t in out)


def enumerate_S(lam: tuple[int, ...], mu: tuple[int, ...]) -> tuple[Perm, ...]:
    """All longest double-coset representatives w with (lam, mu, w) defined.

    Cached up to simultaneous translation of (lam, mu).
    """
    if not lam:
        return ((),)
    s = lam[0]
    return _enumerate_S_cached(tuple(v - s for v in lam),
                               tuple(v - s for v in mu))[0]


def enumerate_S_with_tables(lam: tuple[int, ...], mu: tuple[int, ...]):
    """(S list, aligned contingency tables); cached up to translation."""
    if not lam:
        return ((),), ((),)
    s = lam[0]
    return _enumerate_S_cached(tuple(v - s for v in lam),
                               tuple(v - s for v in mu))


# -- text format ---------------------------------------------------------------


def parse_permutation(text: str, size_hint: int | None = None) -> Perm:
    """One-line notation: comma-separated images, or compact digits for
    m <= 9; 'e' is the identity (size taken from size_hint)."""
    t = text.strip()
    if t == "e":
        if size_hint is None:
            raise ValueError("cannot size the identity permutation 'e' here")
        return identity(size_hint)
    if "," in t:
        images = tuple(int(part) for part in t.split(","))
    elif t.isdigit():
        images = tuple(int(ch) for ch in t)
    else:
        raise ValueError(f"malformed permutation {text!r}")
    if sorted(images) != list(range(1, len(images) + 1)):
        raise ValueError(f"{text!r} is not a permutation of 1..{len(images)}")
    return images


def format_permutation(w: Perm) -> str:
    if len(w) <= 9:
        return "".join(map(str, w))
    return ",".join(map(str, w))
