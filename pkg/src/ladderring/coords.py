"""Coordinate systems (lam, mu, w) on multisegments.

A weakly increasing begin tuple lam, end tuple mu and a permutation w
with lam_i <= mu_{w(i)} + 1 encode the multisegment sum of the
intervals [lam_i, mu_{w(i)}] (empty intervals dropped).  The encoding
is unique up to the double coset of w for the stabilizers of lam and
mu; canonical coordinates pick the longest coset representative.
"""
from __future__ import annotations

from typing import NamedTuple

from .perms import (Perm, in_Q, is_max_double_coset,
                    longest_double_coset_rep, merge_parts, star)
from .segments import Multisegment, Segment

__all__ = ["CoordinateTriple", "build_multisegment", "canonical_coordinates",
           "combine", "format_coords"]

Parts = tuple[tuple[int, ...], tuple[int, ...]]


class CoordinateTriple(NamedTuple):
    lam: tuple[int, ...]
    mu: tuple[int, ...]
    w: Perm

    def __str__(self) -> str:
        return format_coords(self.lam, self.mu, self.w)


def format_coords(lam, mu, w) -> str:
    """Debug rendering, e.g. '(0,1 | 1,2 | 2,1)'."""
    def join(t):
        return ",".join(map(str, t))
    return f"({join(lam)} | {join(mu)} | {join(w)})"


def build_multisegment(lam: tuple[int, ...], mu: tuple[int, ...],
                       w: Perm) -> Multisegment:
    """Sum of [lam_i, mu_{w(i)}] with trivial intervals dropped."""
    if not in_Q(w, lam, mu):
        raise ValueError(f"{format_coords(lam, mu, w)} does not define a multisegment")
    return Multisegment(Segment(lam[i], mu[w[i] - 1]) for i in range(len(w))
                        if lam[i] <= mu[w[i] - 1])


def canonical_coordinates(m: Multisegment) -> CoordinateTriple:
    """The unique (sorted begins, sorted ends, w in S(lam, mu)) encoding m.

    A consistent assignment is found greedily (entries in canonical
    order take the first unused end slot of matching value) and pushed
    to the longest representative of its double coset.
    """
    if not m:
        raise ValueError("the empty multisegment has no coordinates")
    lam = tuple(seg.begin for seg in m.entries)
    mu = tuple(sorted(seg.end for seg in m.entries))
    used = [False] * len(mu)
    images = [0] * len(m)
    for i, seg in enumerate(m.entries):
        for j, end in enumerate(mu):
            if not used[j] and end == seg.end:
                used[j] = True
                images[i] = j + 1
                break
    w = longest_double_coset_rep(tuple(images), lam, mu)
    assert is_max_double_coset(w, lam, mu)
    assert build_multisegment(lam, mu, w) == m, "coordinate round trip failed"
    return CoordinateTriple(lam, mu, w)


class CombinedCoordinates(NamedTuple):
    lam: tuple[int, ...]
    mu: tuple[int, ...]
    x: Perm
    pos_parts: Parts  # positions taken by factor-1 / factor-2 begins
    val_parts: Parts  # value slots taken by factor-1 / factor-2 ends


def combine(m1: Multisegment, m2: Multisegment) -> CombinedCoordinates:
    """Coordinates of m1 + m2 together with the interleaving partitions.

    The representative x is the star product of the factors' canonical
    permutations over the merged position/value partitions, so that the
    partitions identify which coordinates came from which factor.
    """
    if not m1 or not m2:
        raise ValueError("combine expects two nonempty multisegments")
    l1, u1, y1 = canonical_coordinates(m1)
    l2, u2, y2 = canonical_coordinates(m2)
    lam, ip, jp = merge_parts(l1, l2)
    mu, iv, jv = merge_parts(u1, u2)
    xt = star(y1, y2, (ip, jp), (iv, jv))
    assert in_Q(xt, lam, mu)
    x = longest_double_coset_rep(xt, lam, mu)
    assert build_multisegment(lam, mu, x) == m1 + m2
    return CombinedCoordinates(lam, mu, x, (ip, jp), (iv, jv))
