import random

import pytest

from nrank.linalg import IntegerMatrix
from nrank.regression import DIAG_3_5_15, EXAMPLE_1, EXAMPLE_2


@pytest.fixture
def ex1():
    return EXAMPLE_1


@pytest.fixture
def ex2():
    return EXAMPLE_2


@pytest.fixture
def diag3515():
    return DIAG_3_5_15


def random_unimodular(rng: random.Random, d: int, steps: int = 6) -> IntegerMatrix:
    """Product of elementary row operations, so det = +-1."""
    M = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if d > 1:
            c = rng.choice([-2, -1, 1, 2])
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
        if rng.random() < 0.2:
            M[0] = [-a for a in M[0]]
    return IntegerMatrix(M)


def unimodular_inverse(P: IntegerMatrix) -> IntegerMatrix:
    from fractions import Fraction

    import sympy

    inv = sympy.Matrix(P.tolist()).inv()
    return IntegerMatrix([[int(Fraction(str(v))) for v in row] for row in inv.tolist()])


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, in criterion order."""
    lines = []
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" in props and rep.when == "call":
                lines.append((props["criterion"], "PASS" if rep.passed else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for (num, title), verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  criterion {num:2d}: {title}")
