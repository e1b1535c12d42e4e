import itertools

import pytest

from ladderring.coords import build_multisegment, combine
from ladderring.decompose import expand_standard, product_ladders
from ladderring.jacquet import (indicator_key_set, indicator_multiplicity,
                                indicator_multiplicity_standard, indicator_set,
                                jacquet_pairs_ladder, jacquet_pairs_segment,
                                match_two_column)
from ladderring.perms import avoids, bruhat_leq, enumerate_S
from ladderring.segments import (Multisegment, Segment, is_generic, is_ladder,
                                 support)
from ladderring.sweeps import enumerate_ladder_pairs, enumerate_ladders

S = Segment


def mk(*pairs):
    return Multisegment(S(*p) for p in pairs)


def test_jacquet_pairs_segment():
    pairs = jacquet_pairs_segment(S(0, 0))
    assert [(str(l), str(r)) for l, r in pairs] == [("[0,0]", "0"), ("0", "[0,0]")]
    pairs = jacquet_pairs_segment(S(0, 2))
    assert len(pairs) == 4
    lefts = {str(l) for l, _ in pairs}
    assert lefts == {"0", "[2,2]", "[1,2]", "[0,2]"}
    for l, r in pairs:
        assert support(l) + support(r) == support(mk((0, 2)))
    assert jacquet_pairs_segment(S(1, 0)) == [(Multisegment(), Multisegment())]


def test_jacquet_pairs_ladder_two_segments():
    # strictly decreasing breakpoint tuples over the boxes give 6 pairs
    m = mk((0, 1), (1, 2))
    pairs = jacquet_pairs_ladder(m)
    assert len(pairs) == 6
    lefts = [l for l, _ in pairs]
    assert len(set(lefts)) == len(lefts)  # left parts pairwise distinct
    for l, r in pairs:
        assert is_ladder(l) and is_ladder(r)
        assert support(l) + support(r) == support(m)


def test_jacquet_single_segment_matches():
    assert set(map(tuple, jacquet_pairs_ladder(mk((0, 2))))) == \
        set(map(tuple, jacquet_pairs_segment(S(0, 2))))


def test_jacquet_pairs_ladder_rejects_non_ladder():
    with pytest.raises(ValueError):
        jacquet_pairs_ladder(mk((0, 2), (1, 1)))


def test_jacquet_conservation_and_distinctness_sweep():
    for k in (1, 2, 3):
        for m in enumerate_ladders(5, k):
            pairs = jacquet_pairs_ladder(m)
            lefts = set()
            for l, r in pairs:
                assert is_ladder(l) and is_ladder(r)
                assert support(l) + support(r) == support(m)
                assert l not in lefts
                lefts.add(l)


def test_match_two_column_examples():
    assert match_two_column(S(0, 2), S(0, -1), mk((0, 1)), mk((2, 2))) == 1
    assert match_two_column(S(0, 1), S(0, 1), mk((0, 1)), mk((0, 1))) == 1
    assert match_two_column(S(0, 1), S(0, -1), mk((0, 2)), Multisegment()) == 0
    # c = b forces both factors equal to the segment
    assert match_two_column(S(0, 1), S(0, 1), mk((0, 1)), mk((0, 0), (1, 1))) == 0
    # l = 1 degenerate shape: one factor is the whole segment
    assert match_two_column(S(0, 2), S(0, 0), mk((0, 0)), mk((0, 2))) == 1
    assert match_two_column(S(0, 2), S(0, 0), mk((0, 2)), mk((0, 0))) == 1


def _match_oracle(d, dhat, n1, n2):
    """Multiplicity of L(d + dhat) in L(n1) x L(n2) through the KL route."""
    block = Multisegment([d] + ([] if dhat.trivial else [dhat]))
    if support(n1) + support(n2) != support(block):
        return 0
    if not n1 or not n2:
        single = n1 or n2
        return 1 if single == block else 0
    r = product_ladders(n1, n2)
    for w, mult in r.mults.items():
        if r.factor(w) == block:
            return mult
    return 0


def test_match_two_column_against_decomposition_oracle():
    segs = [S(b, e) for b in range(3) for e in range(b, 4)]
    ladders = [Multisegment()] + [mk(*c) for k in (1, 2)
                                  for c in itertools.combinations(segs, k)
                                  if is_ladder(mk(*c)) and is_generic(mk(*c))]
    cases = 0
    for b in range(4):
        d = S(0, b)
        for c in range(-1, b + 1):
            dhat = S(0, c)
            for n1 in ladders:
                for n2 in ladders:
                    got = match_two_column(d, dhat, n1, n2)
                    want = _match_oracle(d, dhat, n1, n2)
                    assert got == want, (d, dhat, n1, n2, got, want)
                    cases += 1
    assert cases > 2000


def test_indicator_examples():
    assert indicator_multiplicity(mk((0, 2), (1, 1)), mk((0, 1)), mk((1, 2))) == 1
    assert indicator_multiplicity(mk((0, 1), (1, 2)), mk((0, 2)), mk((1, 1))) == 0
    # bottom factor always carries its indicator
    for m1, m2 in enumerate_ladder_pairs(4, 4):
        assert indicator_multiplicity(m1 + m2, m1, m2) == 1


def test_indicator_zero_on_support_mismatch():
    assert indicator_multiplicity(mk((0, 3)), mk((0, 1)), mk((1, 2))) == 0


def test_indicator_majorization_small():
    for m1, m2 in enumerate_ladder_pairs(5, 5):
        r = product_ladders(m1, m2)
        for w in r.mults:
            sigma = r.factor(w)
            assert indicator_multiplicity(sigma, m1, m2) == 1, (m1, m2, w)


def test_indicator_set_matches_scalar():
    import random
    rng = random.Random(4)
    pool = [m for k in (1, 2) for m in enumerate_ladders(5, k)]
    segs = [S(b, e) for b in range(5) for e in range(b, 5)]
    for _ in range(40):
        m1, m2 = rng.choice(pool), rng.choice(pool)
        batch = indicator_set(m1, m2)
        # every member has scalar indicator 1
        for sigma in batch:
            assert indicator_multiplicity(sigma, m1, m2) == 1
        # and a scattering of non-members has 0
        total = support(m1 + m2)
        for _ in range(30):
            cand = Multisegment(rng.sample(segs, rng.randint(1, 3)))
            if cand in batch:
                assert indicator_multiplicity(cand, m1, m2) == 1
            elif support(cand) == total:
                assert indicator_multiplicity(cand, m1, m2) == 0


def test_indicator_set_members_have_full_support():
    for m1, m2 in list(enumerate_ladder_pairs(4, 4))[::5]:
        for sigma in indicator_set(m1, m2):
            assert support(sigma) == support(m1 + m2)


# -- standard-module variant -------------------------------------------------


def test_standard_variant_self_occurrence():
    for lam, mu in [((0, 0), (0, 0)), ((0, 1), (1, 2)), ((0, 0, 1), (0, 1, 1)),
                    ((0, 1, 2), (1, 2, 3))]:
        for x in enumerate_S(lam, mu):
            sigma = build_multisegment(lam, mu, x)
            if sigma:
                assert indicator_multiplicity_standard(sigma, lam, mu, x) >= 1


def test_standard_variant_bruhat_necessity():
    # occurrence of the indicator of m^w in the Jacquet module of the
    # standard module at x forces x <= w
    for lam, mu in [((0, 1), (1, 2)), ((0, 0, 1), (0, 1, 1)),
                    ((0, 1, 2), (1, 2, 3)), ((0, 1, 1), (1, 1, 2)),
                    ((0, 0, 1, 1), (0, 1, 1, 2))]:
        Sset = enumerate_S(lam, mu)
        for x in Sset:
            for w in Sset:
                sigma = build_multisegment(lam, mu, w)
                if not sigma:
                    continue
                v = indicator_multiplicity_standard(sigma, lam, mu, x)
                if v > 0:
                    assert bruhat_leq(x, w), (lam, mu, x, w, v)
                if x == w:
                    assert v >= 1


def test_standard_variant_smooth_bound():
    for lam, mu in [((0, 1), (1, 2)), ((0, 0, 1), (0, 1, 1)),
                    ((0, 1, 2), (1, 2, 3)), ((0, 0, 1, 1), (0, 1, 1, 2))]:
        Sset = enumerate_S(lam, mu)
        for x in Sset:
            for w in Sset:
                if not (avoids(w, (3, 2, 1)) and avoids(w, (3, 4, 1, 2))):
                    continue
                sigma = build_multisegment(lam, mu, w)
                if not sigma:
                    continue
                v = indicator_multiplicity_standard(sigma, lam, mu, x)
                assert v <= 1, (lam, mu, x, w, v)


def test_standard_variant_dominates_truth():
    # [M(m^x)] - [pi1 x pi2] is effective, so the indicator count in the
    # standard module dominates the one in the product
    for m1, m2 in list(enumerate_ladder_pairs(4, 4))[::11]:
        lam, mu, x, _, _ = combine(m1, m2)
        r = product_ladders(m1, m2)
        for w, mult in r.mults.items():
            sigma = r.factor(w)
            v = indicator_multiplicity_standard(sigma, lam, mu, x)
            assert v >= indicator_multiplicity(sigma, m1, m2) >= mult


def test_standard_variant_rejects_wide_blocks():
    with pytest.raises(ValueError):
        indicator_multiplicity_standard(
            mk((0, 0), (0, 1), (0, 2)), (0, 0, 0), (0, 1, 2), (3, 2, 1))


def test_standard_variant_matches_expand_on_generic_keys():
    # For generic sigma = the full block itself, occurrence in the
    # standard module agrees with the KL expansion's generic constituent.
    for lam, mu in [((0, 1), (1, 2)), ((0, 0, 1), (0, 1, 1)),
                    ((0, 1, 2), (1, 2, 3))]:
        Sset = enumerate_S(lam, mu)
        for x in Sset:
            exp = expand_standard(lam, mu, x)
            for w in Sset:
                sigma = build_multisegment(lam, mu, w)
                if not sigma or not is_generic(sigma):
                    continue
                got = indicator_multiplicity_standard(sigma, lam, mu, x)
                assert (got > 0) == (exp.multiplicity(w) > 0), (lam, mu, x, w)
