import itertools
import os

import pytest

from ladderring.klengine import (KLCacheError, KLEngine, format_poly,
                                 get_engine, invert_interval)
from ladderring.perms import bruhat_leq, enumerate_S, inverse, length

from oracle_hecke import oracle_kl_table


def perms(n):
    return itertools.permutations(range(1, n + 1))


@pytest.fixture(scope="module")
def engine():
    return KLEngine()


def test_engine_matches_independent_oracle_up_to_S4(engine):
    for n in (2, 3, 4):
        table = oracle_kl_table(n)
        for x in perms(n):
            for w in perms(n):
                expected = table.get((x, w), ())
                assert engine.poly(x, w) == expected, (x, w)


def test_spec_values(engine):
    e4 = (1, 2, 3, 4)
    assert engine.poly(e4, (3, 4, 1, 2)) == (1, 1)
    assert engine.poly(e4, (4, 2, 3, 1)) == (1, 1)
    assert engine.at_one(e4, (3, 4, 1, 2)) == 2
    assert engine.at_one(e4, (4, 2, 3, 1)) == 2
    assert engine.at_one((1, 2, 3), (3, 2, 1)) == 1
    for w in perms(4):
        assert engine.poly(w, w) == (1,)
        assert engine.at_one(w, w) == 1


def test_zero_when_not_below(engine):
    assert engine.poly((2, 1, 3), (1, 3, 2)) == ()
    assert engine.at_one((3, 2, 1), (1, 2, 3)) == 0


def test_smooth_iff_avoids_3412_4231(engine):
    from ladderring.perms import avoids
    e5 = tuple(range(1, 6))
    for w in perms(5):
        smooth = engine.at_one(e5, w) == 1
        assert smooth == avoids(w, (3, 4, 1, 2), (4, 2, 3, 1)), w


def test_inverse_symmetry(engine):
    for w in perms(4):
        for x in perms(4):
            assert engine.poly(x, w) == engine.poly(inverse(x), inverse(w))


def test_degree_bound_and_constant_term(engine):
    for w in perms(5):
        col = engine.column_at_one(w)
        for x in col:
            p = engine.poly(x, w)
            assert p[0] == 1
            if x != w:
                assert 2 * (len(p) - 1) <= length(w) - length(x) - 1


def test_backends_agree_on_S5():
    from ladderring import _klpure
    import ladderring.klengine as kle
    if kle.backend_name() == "pure":
        pytest.skip("compiled kernel unavailable; nothing to compare")
    compiled = KLEngine()
    compiled.warm(5)
    saved = kle._kernel
    kle._kernel = _klpure
    try:
        pure = KLEngine()
        pure.warm(5)
        for w in perms(5):
            for x, val in compiled.column_at_one(w).items():
                assert pure.poly(x, w) == compiled.poly(x, w)
                assert pure.at_one(x, w) == val
    finally:
        kle._kernel = saved


def test_invert_interval_examples(engine):
    # trivial parabolics, S_2
    c = invert_interval((0, 1), (2, 3), (1, 2), engine=engine)
    assert c == {(1, 2): 1, (2, 1): -1}
    # diagonal is 1
    c = invert_interval((0, 0), (0, 0), (2, 1), engine=engine)
    assert c == {(2, 1): 1}
    with pytest.raises(ValueError):
        invert_interval((0, 0), (0, 0), (1, 2), engine=engine)


@pytest.mark.parametrize("lam,mu", [
    ((0, 1, 2), (2, 3, 4)),
    ((0, 1, 2, 3), (1, 2, 3, 4)),
    ((0, 2, 3, 5), (2, 4, 6, 7)),
    ((0, 1, 2, 3, 4), (4, 5, 6, 7, 8)),
])
def test_determinantal_coefficients_on_ladder_coordinates(lam, mu, engine):
    """With strictly increasing coordinates, c_{e,w} = sign(w) on Q."""
    from ladderring.perms import in_Q, sign
    e = tuple(range(1, len(lam) + 1))
    coeffs = invert_interval(lam, mu, e, engine=engine)
    for w in perms(len(lam)):
        if in_Q(w, lam, mu):
            assert coeffs.get(w, 0) == sign(w), (w, lam, mu)
        else:
            assert coeffs.get(w, 0) == 0


@pytest.mark.parametrize("lam,mu", [
    ((0, 0, 1), (0, 1, 1)),
    ((0, 1, 1, 2), (1, 1, 2, 3)),
    ((0, 0, 1, 1), (0, 1, 1, 2)),
    ((0, 1, 2, 3), (0, 2, 2, 4)),
])
def test_invert_then_multiply_is_identity(lam, mu, engine):
    S = enumerate_S(lam, mu)
    for x in S:
        coeffs = invert_interval(lam, mu, x, engine=engine)
        for w in S:
            total = sum(c * engine.at_one(z, w) for z, c in coeffs.items())
            assert total == (1 if w == x else 0), (x, w)


def test_coefficients_independent_of_coordinates(engine):
    # same stabilizers, different values: shared S members get equal c
    for lam1, mu1, lam2, mu2 in [
        ((0, 0, 1), (0, 1, 1), (0, 0, 2), (1, 2, 2)),
        ((0, 1, 2), (1, 2, 3), (0, 2, 4), (3, 5, 7)),
    ]:
        S1, S2 = set(enumerate_S(lam1, mu1)), set(enumerate_S(lam2, mu2))
        for x in S1 & S2:
            c1 = invert_interval(lam1, mu1, x, engine=engine)
            c2 = invert_interval(lam2, mu2, x, engine=engine)
            for w in S1 & S2:
                assert c1.get(w, 0) == c2.get(w, 0), (x, w)


# -- cache -----------------------------------------------------------------------


def test_cache_round_trip(tmp_path):
    eng = KLEngine()
    eng.warm(4)
    path = str(tmp_path / "kl.cache")
    eng.save_cache(path)
    fresh = KLEngine()
    fresh.load_cache(path)
    for w in perms(4):
        for x in perms(4):
            assert fresh.poly(x, w) == eng.poly(x, w)
    assert not fresh.dirty


def test_cache_rejects_bad_version(tmp_path):
    path = str(tmp_path / "kl.cache")
    with open(path, "w") as fh:
        fh.write("# ladderring klcache v999\n1 1 1 1\n")
    with pytest.raises(KLCacheError):
        KLEngine().load_cache(path)


def test_cache_spot_check_catches_corruption(tmp_path):
    eng = KLEngine()
    eng.warm(3)
    path = str(tmp_path / "kl.cache")
    eng.save_cache(path)
    lines = open(path).read().splitlines()
    # corrupt every data record's coefficients
    lines = [lines[0]] + [ln.rsplit(" ", 1)[0] + " 7" for ln in lines[1:]]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    with pytest.raises(KLCacheError):
        KLEngine().load_cache(path)


def test_pure_backend_env_selection():
    import subprocess
    import sys
    out = subprocess.run(
        [sys.executable, "-c",
         "from ladderring.klengine import backend_name; print(backend_name())"],
        capture_output=True, text=True,
        env={**os.environ, "LADDERRING_PURE": "1"})
    assert out.stdout.strip() == "pure"


def test_format_poly():
    assert format_poly(()) == "0"
    assert format_poly((1,)) == "1"
    assert format_poly((1, 1)) == "1 + q"
    assert format_poly((1, 0, 2)) == "1 + 2q^2"
    assert format_poly((1, 2, 1)) == "1 + 2q + q^2"


def test_warm_S6_and_census(engine):
    engine.warm(6)
    cols, pairs = engine.stats()[6]
    assert cols == 720
    e6 = tuple(range(1, 7))
    smooth = sum(1 for w in perms(6) if engine.at_one(e6, w) == 1)
    assert smooth == 366
