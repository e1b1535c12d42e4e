"""Ground-truth decompositions in the Grothendieck ring.

Standard modules expand into irreducibles through values at 1 of KL
polynomials over the poset S(lam, mu); inverting that unitriangular
system expresses an irreducible in standard modules.  Products of
irreducibles are computed by expanding every factor into standard
modules, multiplying (multisegment addition via the star interleaving)
and expanding back.  For ladder factors the expansion collapses to the
signed sum over the full symmetric group (the determinantal identity),
which is the fast path used by the big verification sweeps.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, NamedTuple

from .klengine import get_engine, invert_interval
from .perms import (Perm, avoids, enumerate_S, in_Q, length,
                    longest_double_coset_rep, merge_parts, sign, star)
from .coords import build_multisegment, canonical_coordinates
from .segments import Multisegment, is_ladder, width

__all__ = ["DecompositionResult", "expand_standard", "product_ladders",
           "product_irreducibles"]


class DecompositionResult(NamedTuple):
    """Multiplicities of irreducibles, keyed by w in S(lam, mu)."""

    lam: tuple[int, ...]
    mu: tuple[int, ...]
    mults: dict[Perm, int]

    def multiplicity(self, w: Perm) -> int:
        return self.mults.get(w, 0)

    def sorted_items(self) -> list[tuple[Perm, int]]:
        return sorted(self.mults.items(), key=lambda kv: (length(kv[0]), kv[0]))

    def factor(self, w: Perm) -> Multisegment:
        return build_multisegment(self.lam, self.mu, w)

    def render_lines(self) -> Iterator[str]:
        for w, mult in self.sorted_items():
            mseg = self.factor(w)
            yield (f"m^{'.'.join(map(str, w))}_"
                   f"{{{','.join(map(str, self.lam))} | {','.join(map(str, self.mu))}}}"
                   f"  = {mseg}  x{mult}  width={width(mseg)}"
                   f"  avoids321={avoids(w, (3, 2, 1))}"
                   f"  avoids3412={avoids(w, (3, 4, 1, 2))}")


def _shift_key(lam, mu):
    s = lam[0]
    return tuple(v - s for v in lam), tuple(v - s for v in mu), s


@lru_cache(maxsize=1 << 18)
def _coset_rep_cached(lam, mu, wt):
    return longest_double_coset_rep(wt, lam, mu)


@lru_cache(maxsize=1 << 17)
def _expand_row_cached(lam, mu, x) -> tuple[tuple[Perm, int], ...]:
    eng = get_engine()
    out = []
    for w in enumerate_S(lam, mu):
        v = eng.at_one(x, w)
        if v:
            out.append((w, v))
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def _q_members(lam, mu) -> tuple[Perm, ...]:
    m = len(lam)
    return tuple(w for w in itertools.permutations(range(1, m + 1))
                 if in_Q(w, lam, mu))


def expand_standard(lam: tuple[int, ...], mu: tuple[int, ...],
                    x: Perm) -> DecompositionResult:
    """Constituents of the standard module at (lam, mu, x):
    w -> P_{x,w}(1) over w >= x in S(lam, mu)."""
    if x not in enumerate_S(lam, mu):
        raise ValueError("x is not a longest double-coset representative here")
    nl, nm, s = _shift_key(lam, mu)
    row = _expand_row_cached(nl, nm, x)
    return DecompositionResult(lam, mu, dict(row))


def _signed_standard_terms(lam, mu, y, ladder: bool):
    """Expansion of one irreducible factor into standard modules:
    [(coefficient, w)] over the factor's own coordinate system."""
    if ladder:
        return [(sign(w), w) for w in _q_members(*_shift_key(lam, mu)[:2])]
    coeffs = invert_interval(lam, mu, y)
    return [(c, w) for w, c in coeffs.items()]


def _accumulate_product(factor_coords, factor_terms) -> DecompositionResult:
    """Multiply standard-module expansions across factors and expand back."""
    lam, mu = factor_coords[0][0], factor_coords[0][1]
    state = [(c, w) for c, w in factor_terms[0]]
    for t in range(1, len(factor_coords)):
        l2, u2 = factor_coords[t][0], factor_coords[t][1]
        nlam, ip, jp = merge_parts(lam, l2)
        nmu, iv, jv = merge_parts(mu, u2)
        nl, nm, s = _shift_key(nlam, nmu)
        nstate = []
        for c1, w1 in state:
            for c2, w2 in factor_terms[t]:
                wt = star(w1, w2, (ip, jp), (iv, jv))
                assert in_Q(wt, nlam, nmu)
                nstate.append((c1 * c2, _coset_rep_cached(nl, nm, wt)))
        lam, mu, state = nlam, nmu, nstate
    nl, nm, s = _shift_key(lam, mu)
    acc: dict[Perm, int] = {}
    for c, x in state:
        for w, p in _expand_row_cached(nl, nm, x):
            acc[w] = acc.get(w, 0) + c * p
    mults = {w: v for w, v in acc.items() if v}
    assert all(v > 0 for v in mults.values()), \
        "negative multiplicity: decomposition engine bug"
    return DecompositionResult(lam, mu, mults)


def product_ladders(m1: Multisegment, m2: Multisegment) -> DecompositionResult:
    """[L(m1)][L(m2)] for two ladders, via the determinantal identity.

    Each factor expands as sum of sign(w) [M(...)] over all w defining a
    multisegment in the factor's strictly increasing coordinates; the
    standard modules multiply by interleaving, and KL values at 1
    expand them back.  All multiplicities land in {0, 1}, which is
    asserted.
    """
    if not (is_ladder(m1) and is_ladder(m2)):
        raise ValueError("product_ladders expects two ladder multisegments")
    if not m1 or not m2:
        return _product_with_empty(m1, m2)
    coords = [canonical_coordinates(m) for m in (m1, m2)]
    terms = [_signed_standard_terms(l, u, y, ladder=True) for l, u, y in coords]
    result = _accumulate_product(coords, terms)
    bad = {w: v for w, v in result.mults.items() if v not in (0, 1)}
    assert not bad, f"multiplicity-one violation: {bad}"
    return result


def product_irreducibles(factors: list[Multisegment]) -> DecompositionResult:
    """[L(m_1)] ... [L(m_k)] for arbitrary multisegments (general route)."""
    factors = [m for m in factors if m]
    if not factors:
        raise ValueError("need at least one nonempty factor")
    coords = [canonical_coordinates(m) for m in factors]
    terms = [_signed_standard_terms(l, u, y, ladder=False) for l, u, y in coords]
    return _accumulate_product(coords, terms)


def _product_with_empty(m1: Multisegment, m2: Multisegment) -> DecompositionResult:
    keep = m1 or m2
    if not keep:
        return DecompositionResult((), (), {(): 1})
    lam, mu, y = canonical_coordinates(keep)
    return DecompositionResult(lam, mu, {y: 1})
