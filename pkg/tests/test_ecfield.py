import math
import random
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nrank.ecfield import (
    INF,
    BudgetExceeded,
    EllipticCurve,
    FiniteField,
    NotOnCurveError,
    TraceSequence,
    card_extension,
    closure_exponent,
    ec_add,
    ec_mul,
    embed,
    exponent_growth_experiment,
    field,
    find_irreducible,
    frobenius_companion,
    frobenius_matrix,
    gcd_orders_curves,
    gcd_orders_experiment,
    group_structure,
    group_structure_exhaustive,
    is_irreducible_mod_p,
    is_isogenous,
    is_isogenous_closure,
    is_ordinary,
    iter_points,
    point_count_naive,
    trace,
    trace_power,
    trace_sequence,
)
from nrank.linalg import IntegerMatrix
from nrank.spectral import EXCEPTIONAL, REGULAR, classify

E1 = EllipticCurve(5, 1, 1, 1)        # y^2 = x^3 + x + 1, t = -3
SS = EllipticCurve(5, 1, 0, 2)        # y^2 = x^3 + 2, t = 0
T1 = EllipticCurve(5, 1, 3, 2)        # y^2 = x^3 + 3x + 2, t = 1
TWIST = EllipticCurve(5, 1, 4, 3)     # quadratic twist of E1, t = 3

x = sympy.Symbol("x")


# -- fields --------------------------------------------------------------------

@pytest.mark.parametrize("p,k", [(3, 2), (5, 2), (3, 3), (2, 3), (7, 2)])
def test_irreducibility_matches_sympy(p, k):
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        m = low + [1]
        want = sympy.Poly(list(reversed(m)), x, modulus=p).is_irreducible
        assert is_irreducible_mod_p(m, p) == want


def _oracle_mul(F, a, b):
    pa = sympy.Poly(list(reversed(F.to_digits(a))), x, modulus=F.p)
    pb = sympy.Poly(list(reversed(F.to_digits(b))), x, modulus=F.p)
    pm = sympy.Poly(list(reversed(F.modulus)), x, modulus=F.p)
    r = (pa * pb).rem(pm)
    digits = [int(c) % F.p for c in reversed(r.all_coeffs())]
    return F.from_digits(digits + [0] * (F.k - len(digits)))


@pytest.mark.parametrize("p,k", [(5, 2), (3, 3), (7, 2), (5, 3)])
def test_field_tables_match_polynomial_oracle(p, k):
    F = field(p, k)
    rng = random.Random(p * 10 + k)
    for _ in range(200):
        a, b = rng.randrange(F.q), rng.randrange(F.q)
        assert F.mul(a, b) == _oracle_mul(F, a, b)
        da, db = F.to_digits(a), F.to_digits(b)
        assert F.add(a, b) == F.from_digits([(u + v) % p for u, v in zip(da, db)])
        assert F.neg(a) == F.from_digits([-u % p for u in da])
        if a:
            assert F.mul(a, F.inv(a)) == 1


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(5, 1), (5, 2), (7, 2), (3, 4)]), st.data())
def test_field_axioms(pk, data):
    F = field(*pk)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    assert F.pow(a, F.q) == a
    s = F.sqrt(F.mul(a, a))
    assert s is not None and F.mul(s, s) == F.mul(a, a)


def test_field_errors():
    with pytest.raises(ValueError):
        FiniteField(6)
    with pytest.raises(BudgetExceeded):
        FiniteField(5, 12)
    with pytest.raises(ZeroDivisionError):
        field(5, 2).inv(0)


def test_find_irreducible_deterministic():
    assert find_irreducible(5, 2) == find_irreducible(5, 2)
    assert is_irreducible_mod_p(list(find_irreducible(5, 4)), 5)


def test_embedding_is_a_ring_map():
    small, big = field(5, 2), field(5, 4)
    rng = random.Random(1)
    for _ in range(100):
        a, b = rng.randrange(25), rng.randrange(25)
        assert embed(5, 2, 2, small.mul(a, b)) == big.mul(embed(5, 2, 2, a), embed(5, 2, 2, b))
        assert embed(5, 2, 2, small.add(a, b)) == big.add(embed(5, 2, 2, a), embed(5, 2, 2, b))
    assert embed(5, 1, 3, 4) == 4


# -- group law -----------------------------------------------------------------

def test_group_law_examples():
    P = (0, 1)
    assert ec_add(E1, P, INF) == P
    assert ec_add(E1, INF, P) == P
    assert ec_add(E1, P, (0, 4)) is INF
    assert ec_add(E1, P, P) == (4, 2)


def test_group_law_rejects_off_curve():
    with pytest.raises(NotOnCurveError):
        ec_add(E1, (0, 2), (0, 1))


@pytest.mark.parametrize("E", [E1, SS, EllipticCurve(7, 2, 3, 10), EllipticCurve(11, 1, 2, 7)])
def test_group_law_properties(E):
    pts = list(iter_points(E))
    assert len(pts) == point_count_naive(E)
    rng = random.Random(0)
    for _ in range(60):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        S = ec_add(E, P, Q)
        assert E.on_curve(S)
        assert S == ec_add(E, Q, P)
        assert ec_add(E, S, R) == ec_add(E, P, ec_add(E, Q, R))
        assert ec_mul(E, len(pts), P) is INF
        assert ec_mul(E, -1, P) == (INF if P is INF else (P[0], E.field.neg(P[1])))


def test_curve_validation():
    with pytest.raises(ValueError):
        EllipticCurve(3, 1, 1, 1)
    with pytest.raises(ValueError):
        EllipticCurve(5, 1, 0, 0)
    assert EllipticCurve.parse("5^2:3,7") == EllipticCurve(5, 2, 3, 7)
    assert EllipticCurve.parse("7:1,1").k == 1
    assert EllipticCurve.parse(E1.format()) == E1


# -- counting and traces -------------------------------------------------------

def test_counts():
    assert point_count_naive(E1) == 9
    assert point_count_naive(SS) == 6
    assert trace(E1) == -3 and trace(SS) == 0 and trace(T1) == 1 and trace(TWIST) == 3


def test_extension_count_f25():
    ts = trace_sequence(E1)
    assert trace_power(ts, 2) == -1
    assert card_extension(ts, 2) == 27 == point_count_naive(E1, 2)


def test_recurrence_base():
    ts = TraceSequence(-3, 5)
    assert trace_power(ts, 0) == 2 and trace_power(ts, 1) == -3
    with pytest.raises(ValueError):
        TraceSequence(5, 5)


@pytest.mark.parametrize("E,n_max", [
    (E1, 7), (SS, 7), (T1, 6), (EllipticCurve(7, 1, 3, 5), 5), (EllipticCurve(11, 1, 2, 7), 4),
    (EllipticCurve(5, 2, 1, 7), 3), (EllipticCurve(13, 1, 0, 3), 4),
])
def test_recurrence_matches_enumeration(E, n_max):
    ts = trace_sequence(E)
    for n in range(1, n_max + 1):
        if E.q ** n > 10 ** 5:
            break
        assert card_extension(ts, n) == point_count_naive(E, n)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 11, 13, 17, 19, 23]), st.integers(0, 22), st.integers(0, 22))
def test_hasse_bound_random_curves(p, a, b):
    try:
        E = EllipticCurve(p, 1, a % p, b % p)
    except ValueError:
        return
    c = point_count_naive(E)
    assert (c - p - 1) ** 2 <= 4 * p


@pytest.mark.parametrize("t", [-4, -3, -1, 0, 1, 2, 4])
def test_hasse_bound_extensions(t):
    ts = TraceSequence(t, 5)
    for n in range(1, 501):
        assert trace_power(ts, n) ** 2 <= 4 * 5 ** n


def test_point_count_budget():
    with pytest.raises(BudgetExceeded):
        point_count_naive(E1, 6, budget=10 ** 4)


# -- group structure -----------------------------------------------------------

def test_structure_examples():
    gs = group_structure(E1, 1)
    assert (gs.m, gs.l) == (1, 9) and gs.cyclic
    gs = group_structure(SS, 2)
    assert (gs.m, gs.l) == (6, 6)
    ex = group_structure_exhaustive(SS, 2)
    assert (ex.m, ex.l) == (6, 6)


@pytest.mark.parametrize("E,n_max", [(E1, 5), (SS, 5), (T1, 5), (TWIST, 4), (EllipticCurve(7, 1, 3, 5), 3),
                                     (EllipticCurve(5, 2, 1, 7), 2)])
def test_structure_matches_exhaustive_and_invariants(E, n_max):
    ts = trace_sequence(E)
    for n in range(1, n_max + 1):
        gs = group_structure(E, n, seed=3)
        ex = group_structure_exhaustive(E, n)
        assert (gs.m, gs.l) == (ex.m, ex.l)
        qn = E.q ** n
        assert gs.l % gs.m == 0
        assert gs.m * gs.l == gs.card == card_extension(ts, n)
        assert (qn - 1) % gs.m == 0
        assert (trace_power(ts, n) - 2) % gs.m == 0


def test_structure_is_deterministic():
    a = [group_structure(E1, n, seed=9) for n in range(1, 6)]
    b = [group_structure(E1, n, seed=9) for n in range(1, 6)]
    assert a == b


def test_structure_ordinary_n6_frozen():
    # exhaustive oracle: E(F_5^6) = Z/72 x Z/216
    gs = group_structure(E1, 6)
    assert (gs.m, gs.l, gs.card) == (72, 216, 15552)


def test_structure_ordinary_n4_ratio_frozen():
    gs = group_structure_exhaustive(E1, 4)
    assert (gs.m, gs.l, gs.card) == (3, 225, 675)
    assert math.log(225) / (4 * math.log(5)) == pytest.approx(0.841303, abs=1e-6)


def test_structure_upper_bound_mode():
    gs = group_structure(E1, 6, sampling_limit=1000)
    assert gs.mode == "upper-bound"
    assert gs.m == gcd(gcd(15552, 5 ** 6 - 1), 74 - 2) and gs.m * gs.l == gs.card


@pytest.mark.parametrize("E", [SS, EllipticCurve(11, 1, 0, 1), EllipticCurve(17, 1, 0, 5)])
def test_supersingular_pinch(E):
    assert trace(E) == 0
    q = E.q
    gs = group_structure(E, 2)
    assert gs.card == (q + 1) ** 2
    assert gs.m == gs.l == q + 1


# -- ordinarity and isogeny ----------------------------------------------------

def test_ordinary():
    assert is_ordinary(E1)
    assert not is_ordinary(SS)
    assert is_ordinary(E1.quadratic_twist())


def test_twist():
    tw = E1.quadratic_twist()
    assert tw == TWIST
    assert trace(tw) == -trace(E1)


def test_isogeny():
    assert is_isogenous(E1, E1) and is_isogenous_closure(E1, E1) == 1
    assert not is_isogenous(E1, TWIST)
    assert is_isogenous_closure(E1, TWIST) == 2
    assert not is_isogenous(E1, SS) and is_isogenous_closure(E1, SS) is None
    with pytest.raises(ValueError):
        is_isogenous(E1, EllipticCurve(7, 1, 1, 1))


def test_isogeny_is_count_equality():
    curves = [EllipticCurve(7, 1, a, b) for a in range(7) for b in range(7)
              if (4 * a ** 3 + 27 * b ** 2) % 7]
    for A in curves[::3]:
        for B in curves[::4]:
            assert is_isogenous(A, B) == (point_count_naive(A) == point_count_naive(B))


def test_closure_exponent_even_twist():
    for t in range(-4, 5):
        assert closure_exponent(t, -t, 5) == (1 if t == 0 else 2)


# -- experiments ---------------------------------------------------------------

def test_exponent_growth_floor_and_values():
    pts = exponent_growth_experiment(SS, 4)
    assert pts[1].ratio == pytest.approx(math.log(6) / (2 * math.log(5)), abs=1e-12)
    pts = exponent_growth_experiment(E1, 6)
    assert pts[5].ratio == pytest.approx(math.log(216) / (6 * math.log(5)), abs=1e-12)
    for p in pts:
        assert p.ratio >= p.floor - 1e-12


def test_gcd_orders_equal_curves():
    s = gcd_orders_curves(E1, E1, 60)
    for p in s:
        assert p.gcd == card_extension(TraceSequence(-3, 5), p.n)
    slope, _ = s.slope()
    assert slope == pytest.approx(math.log(5), abs=1e-3)


def test_gcd_orders_non_isogenous_small():
    slope, _ = gcd_orders_experiment(-3, 0, 5, 200).slope()
    assert slope < 0.05 * math.log(5)


def test_gcd_orders_twist_even():
    s = gcd_orders_curves(E1, TWIST, 60)
    for p in s:
        if p.n % 2 == 0:
            assert p.gcd == card_extension(TraceSequence(-3, 5), p.n)


# -- Frobenius matrices --------------------------------------------------------

def test_frobenius_companion():
    assert frobenius_matrix(E1) == IntegerMatrix([[0, -5], [1, -3]])
    assert frobenius_companion(-3, 5) == IntegerMatrix([[0, -5], [1, -3]])


def test_frobenius_pairs():
    M = frobenius_matrix(E1, T1)
    assert M.dim == 4
    assert classify(M, 2).verdict == REGULAR
    assert classify(frobenius_matrix(E1, TWIST), 2).verdict == EXCEPTIONAL
