import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrank import algnum
from nrank.algnum import (
    AlgebraicNumber,
    DependencePrecisionError,
    DependenceWitness,
    Independent,
    combo_minpoly,
    dependence_classes,
    is_root_of_unity,
    mult_dependent,
    roots_of,
    torus_rank_rational,
    verify_witness,
    weil_height,
)
from nrank.poly import RationalPoly

P = RationalPoly.parse


def rat(v):
    return AlgebraicNumber.rational(v)


def real_root(poly, which=-1):
    rs = sorted(roots_of(P(poly)), key=lambda a: float(a.approx(64)[0].real))
    return rs[which]


SQRT2_UNIT = "-1,-2,1"     # x^2 - 2x - 1, roots 1 +- sqrt 2
SQRT2_SQUARE = "1,-6,1"    # x^2 - 6x + 1, roots 3 +- 2 sqrt 2


# -- isolation -----------------------------------------------------------------

def test_roots_are_isolated_and_distinct():
    rs = roots_of(P("1,0,0,0,1"))
    assert len(rs) == 4 and len({r.box for r in rs}) == 4
    for r in rs:
        z, rad = r.approx(128)
        with mpmath.workprec(160):
            assert abs(z ** 4 + 1) < 1e-30


# -- heights -------------------------------------------------------------------

def test_height_of_two():
    h = weil_height(rat(2), 64)
    with mpmath.workprec(256):
        assert h.contains(mpmath.log(2))
    assert h.width < mpmath.mpf(2) ** (1 - 32)


def test_height_roots_of_unity_exactly_zero():
    for poly in ("1,1", "-1,1", "1,0,1", "1,1,1", "1,1,1,1,1"):
        for z in roots_of(P(poly)):
            assert weil_height(z).is_zero
    assert weil_height(rat(0)).is_zero


def test_height_of_unit_quadratic():
    h = weil_height(real_root(SQRT2_UNIT), 128)
    with mpmath.workprec(400):
        ref = mpmath.log(1 + mpmath.sqrt(2)) / 2
    assert h.contains(ref)
    assert abs(float(ref) - 0.4407) < 1e-4


def test_height_non_monic():
    # 3x - 2: root 2/3, height log 3
    h = weil_height(rat(Fraction(2, 3)))
    with mpmath.workprec(256):
        assert h.contains(mpmath.log(3))


@pytest.mark.parametrize("poly", ["-2,0,1", "-1,-1,1", "1,-3,0,1", "5,1,1", "-3,0,0,0,1"])
@pytest.mark.parametrize("prec", [32, 64, 128])
def test_height_interval_contains_refined_value(poly, prec):
    for z in roots_of(P(poly)):
        h = weil_height(z, prec)
        fine = weil_height(z, 4 * prec)
        with mpmath.workprec(8 * prec):
            mid = (fine.lo + fine.hi) / 2
        assert h.lo <= mid <= h.hi
        assert h.width < mpmath.mpf(2) ** (1 - prec / 2)


def test_height_precision_floor():
    with pytest.raises(ValueError):
        weil_height(rat(2), 16)


# -- roots of unity ------------------------------------------------------------

def test_is_root_of_unity_examples():
    assert is_root_of_unity(roots_of(P("1,1"))[0]) == 2
    assert all(is_root_of_unity(z) is None for z in roots_of(P("-1,-1,1")))
    assert all(is_root_of_unity(z) == 3 for z in roots_of(P("1,1,1")))


# -- multiplicative dependence -------------------------------------------------

def test_dependence_rational_examples():
    assert mult_dependent(rat(3), rat(9)) == DependenceWitness(2, -1)
    r = mult_dependent(rat(2), rat(3))
    assert isinstance(r, Independent) and r.exact
    assert mult_dependent(rat(2), rat(-2)).dependent
    assert mult_dependent(rat(Fraction(1, 4)), rat(8)) == DependenceWitness(3, 2)


def test_dependence_quadratic_units():
    w = mult_dependent(real_root(SQRT2_UNIT), real_root(SQRT2_SQUARE))
    assert w == DependenceWitness(2, -1)


def test_dependence_root_of_unity_inputs():
    z = roots_of(P("1,1,1"))[0]
    assert mult_dependent(z, rat(5)) == DependenceWitness(3, 0)
    assert mult_dependent(rat(5), rat(-1)) == DependenceWitness(0, 2)


def test_independent_general_path_is_bounded():
    a, b = real_root(SQRT2_UNIT), real_root("-1,-4,1")   # 1 + sqrt 2, 2 + sqrt 5
    r = mult_dependent(a, b, bound=16)
    assert isinstance(r, Independent) and r.searched_bound == 16


def test_conjugates_tested_individually():
    a_plus, a_minus = real_root(SQRT2_UNIT, -1), real_root(SQRT2_UNIT, 0)
    # (1 + sqrt 2)(1 - sqrt 2) = -1, so the conjugates are dependent
    w = mult_dependent(a_plus, a_minus)
    assert w.dependent and verify_witness(a_plus, a_minus, w)


def test_zero_rejected():
    with pytest.raises(ValueError):
        mult_dependent(rat(0), rat(2))


def test_precision_failure_is_distinct(monkeypatch):
    # height intervals that never narrow keep several ratio candidates alive
    calls = []

    def stuck(alpha, precision=64):
        calls.append(precision)
        return algnum.HeightInterval(mpmath.mpf("0.4"), mpmath.mpf("0.5"))

    monkeypatch.setattr(algnum, "weil_height", stuck)
    a, b = real_root(SQRT2_UNIT), real_root("-1,-4,1")
    with pytest.raises(DependencePrecisionError):
        mult_dependent(a, b, bound=8)
    assert max(calls) == algnum.MAX_PRECISION


def _brute_dependent(x: Fraction, y: Fraction, lim=20):
    for a1 in range(-lim, lim + 1):
        for a2 in range(-lim, lim + 1):
            if (a1, a2) != (0, 0) and x ** a1 * y ** a2 == 1:
                return True
    return False


small_rationals = st.builds(
    lambda n, d, s: Fraction(s * n, d),
    st.integers(1, 100), st.integers(1, 100), st.sampled_from([1, -1]),
).filter(lambda q: max(abs(q.numerator), q.denominator) <= 100)


@settings(max_examples=150, deadline=None)
@given(small_rationals, small_rationals)
def test_rational_completeness(x, y):
    r = mult_dependent(rat(x), rat(y))
    assert r.dependent == _brute_dependent(x, y)
    if r.dependent:
        assert x ** r.a1 * y ** r.a2 == 1


def test_brute_force_finds_powers():
    assert _brute_dependent(Fraction(4), Fraction(8))
    assert not _brute_dependent(Fraction(2), Fraction(3))


@pytest.mark.parametrize("pa,pb", [(SQRT2_UNIT, SQRT2_SQUARE), ("-2,0,1", "-8,0,1"), ("-3,1", "-27,1"),
                                   ("-2,0,1", "-4,1")])
def test_witness_soundness_and_height_homogeneity(pa, pb):
    for a in roots_of(P(pa)):
        for b in roots_of(P(pb)):
            w = mult_dependent(a, b)
            if not w.dependent:
                continue
            assert combo_minpoly(a, w.a1, b, w.a2) == P("-1,1")
            ha, hb = weil_height(a, 128), weil_height(b, 128)
            with mpmath.workprec(200):
                lo = abs(w.a1) * ha.lo - abs(w.a2) * hb.hi
                hi = abs(w.a1) * ha.hi - abs(w.a2) * hb.lo
            assert lo <= 0 <= hi


def test_sqrt2_powers_dependent():
    # sqrt 2 and 4: (sqrt 2)^4 = 4
    s = real_root("-2,0,1")
    w = mult_dependent(s, rat(4))
    assert w.dependent and verify_witness(s, rat(4), w)


# -- classes and torus rank ----------------------------------------------------

def test_classes_examples():
    assert dependence_classes([rat(2), rat(3), rat(9)]).classes == [[0], [1, 2]]
    assert dependence_classes([rat(3), rat(5), rat(15)]).classes == [[0], [1], [2]]
    assert dependence_classes([rat(2)]).classes == [[0]]


def test_classes_reject_roots_of_unity():
    with pytest.raises(ValueError):
        dependence_classes([rat(2), rat(-1)])


def _as_sets(nums, part):
    return {frozenset(nums[i] for i in c) for c in part.classes}


def test_classes_order_independent():
    vals = [2, 3, 4, 9, 5, 27, 25, 7, 8]
    rng = random.Random(5)
    base = _as_sets(vals, dependence_classes([rat(v) for v in vals]))
    for _ in range(5):
        perm = vals[:]
        rng.shuffle(perm)
        assert _as_sets(perm, dependence_classes([rat(v) for v in perm])) == base
    assert frozenset({2, 4, 8}) in base and frozenset({3, 9, 27}) in base


def test_classes_threaded_matches_serial():
    nums = [rat(v) for v in (2, 3, 4, 9, 6)]
    assert dependence_classes(nums, workers=4).classes == dependence_classes(nums).classes


def test_torus_rank_examples():
    assert torus_rank_rational([3, 5, 15]) == 2
    assert torus_rank_rational([2, 4, 8]) == 1
    assert torus_rank_rational([6, 10, 15]) == 3
    assert torus_rank_rational([1, -1]) == 0
    assert torus_rank_rational([Fraction(1, 2), 2]) == 1


def test_torus_rank_rejects_irrational():
    with pytest.raises(ValueError):
        torus_rank_rational([real_root("-2,0,1")])
