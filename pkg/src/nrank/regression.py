"""Bundled worked examples, rerun by the ``paper-regression`` command.

Each case returns (ok, detail).  Names refer only to the fixture, so a
failing line reads on its own.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import spectral as _spectral
from . import ecfield as _ec
from .algnum import DependenceWitness, Independent, mult_dependent, roots_of, torus_rank_rational
from .linalg import (
    IntegerMatrix,
    determinant_ideal_gen,
    exterior_power,
    n_rank,
)
from .poly import RationalPoly, char_poly, factor_over_Q

EXAMPLE_1 = IntegerMatrix([
    [21, -10, 2, -12, 1],
    [15, -7, 5, -15, 3],
    [3, -2, 4, -3, 1],
    [9, -4, -1, 0, -1],
    [-2, 1, 1, 2, 2],
])

EXAMPLE_2 = IntegerMatrix.block_diag(
    IntegerMatrix([[1]]), IntegerMatrix([[-1]]), IntegerMatrix([[2, 1], [0, 2]]),
    IntegerMatrix([[4]]))

DIAG_3_5_15 = IntegerMatrix.diag(3, 5, 15)


@dataclass(frozen=True)
class Case:
    name: str
    run: Callable[[], tuple]


def _rat(v):
    return roots_of(RationalPoly([-v, 1]))[0]


def _example1_charpoly():
    got = factor_over_Q(char_poly(EXAMPLE_1))
    want = [((-2, 1), 1), ((-3, 1), 3), ((-9, 1), 1)]
    have = sorted((tuple(int(c) for c in g.coeffs), m) for g, m in got.factors)
    return have == sorted(want), f"factors {have}"


def _example1_dependence():
    w = mult_dependent(_rat(3), _rat(9))
    i = mult_dependent(_rat(2), _rat(3))
    ok = (isinstance(w, DependenceWitness) and (w.a1, w.a2) == (2, -1)
          and isinstance(i, Independent))
    return ok, f"(3,9) -> {w}, (2,3) -> {i}"


def _example1_profile():
    prof = _spectral.spectral_profile(EXAMPLE_1)
    classes = sorted(
        (sorted(int(prof.eigen[i].value.value) for i in c.members), c.h, c.h_bar)
        for c in prof.classes)
    ok = (prof.l, prof.l_bar) == (0, 0) and classes == [([2], 1, 0), ([3, 9], 4, 2)]
    return ok, f"l={prof.l} l_bar={prof.l_bar} classes={classes}"


def _example1_verdicts():
    rows = _spectral.classify_all(EXAMPLE_1)
    got = [v.verdict for v in rows]
    want = [_spectral.REGULAR] * 3 + [_spectral.EXCEPTIONAL, _spectral.EXCEPTIONAL_BY_THEORY,
                                      _spectral.TRIVIAL]
    return got == want, " ".join(f"{v.r}:{v.label}" for v in rows)


def _example2():
    prof = _spectral.spectral_profile(EXAMPLE_2)
    v1 = _spectral.classify(None, 1, profile=prof).verdict
    v0 = _spectral.classify(None, 0, profile=prof).verdict
    hs = [(c.h, c.h_bar) for c in prof.classes]
    ok = ((prof.l, prof.l_bar) == (2, 0) and hs == [(3, 1)]
          and v1 == _spectral.EXCEPTIONAL and v0 == _spectral.REGULAR)
    return ok, f"l={prof.l} l_bar={prof.l_bar} h={hs} r=1:{v1} r=0:{v0}"


def _diag_classes():
    prof = _spectral.spectral_profile(DIAG_3_5_15)
    hs = sorted((c.h, c.h_bar) for c in prof.classes)
    return hs == [(1, 0)] * 3, f"classes {hs}"


def _diag_corollary():
    cc = _spectral.corollary_check(DIAG_3_5_15)
    v = _spectral.classify(DIAG_3_5_15, 1).verdict
    e = torus_rank_rational([3, 5, 15])
    ok = cc is not None and (cc.e, cc.f, cc.consistent) == (2, 0, True) and v == _spectral.REGULAR and e == 2
    return ok, f"e={cc.e} f={cc.f} consistent={cc.consistent} r=1:{v}"


def _exterior_multiplicative():
    rng = random.Random(7)
    for _ in range(5):
        A = IntegerMatrix([[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)])
        B = IntegerMatrix([[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)])
        if exterior_power(A @ B, 2) != exterior_power(A, 2) @ exterior_power(B, 2):
            return False, f"mismatch for A={A.tolist()} B={B.tolist()}"
    return True, "5 random pairs"


def _ideal_zero():
    ok = determinant_ideal_gen(EXAMPLE_1, 0) == 1 and n_rank(IntegerMatrix.identity(3).scale(6), 6) == 0
    return ok, "I_0 = Z and N-rank(N I) = 0"


def _ec_card_f25():
    E = _ec.EllipticCurve(5, 1, 1, 1)
    ts = _ec.trace_sequence(E)
    rec = _ec.card_extension(ts, 2)
    naive = _ec.point_count_naive(E, 2)
    return rec == naive == 27, f"recurrence {rec} vs naive {naive}"


def _ec_trivial_floor():
    worst = None
    for E, n_max in ((_ec.EllipticCurve(5, 1, 1, 1), 5), (_ec.EllipticCurve(5, 1, 0, 2), 4)):
        for pt in _ec.exponent_growth_experiment(E, n_max):
            gap = pt.ratio - pt.floor
            worst = gap if worst is None else min(worst, gap)
    return worst >= -1e-12, f"min ratio - floor = {worst:.6g}"


CASES = [
    Case("example-1 characteristic polynomial", _example1_charpoly),
    Case("example-1 dependence of 3, 9 and 2", _example1_dependence),
    Case("example-1 profile", _example1_profile),
    Case("example-1 verdict table", _example1_verdicts),
    Case("example-2 realization", _example2),
    Case("diag(3,5,15) classes", _diag_classes),
    Case("diag(3,5,15) corollary", _diag_corollary),
    Case("exterior power multiplicativity", _exterior_multiplicative),
    Case("empty minor and zero N-rank", _ideal_zero),
    Case("E(F_25) recurrence vs naive count", _ec_card_f25),
    Case("exponent ratio above trivial floor", _ec_trivial_floor),
]


def run_regression(cases=None):
    """Yield (name, ok, detail) for every case; exceptions count as failures."""
    for case in cases or CASES:
        try:
            ok, detail = case.run()
        except Exception as exc:  # a crash is a mismatch, report and go on
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield case.name, bool(ok), detail
