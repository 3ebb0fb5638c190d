"""Univariate polynomials over Q.

Coefficients are :class:`fractions.Fraction`, stored in ascending degree.
Irreducible factorization delegates to sympy; everything else (arithmetic,
gcd, resultants, characteristic polynomials, invariant factors and the
cyclotomic test) is done here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .linalg import as_matrix

FACTOR_DEGREE_CAP = 24


class DegreeCapError(ValueError):
    """Polynomial degree exceeds the configured factorization cap."""


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class RationalPoly:
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(Fraction(c) for c in self.coeffs))

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "RationalPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots) -> "RationalPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @classmethod
    def parse(cls, text: str) -> "RationalPoly":
        """Parse ``"6,-5,1"`` (ascending coefficients) into x^2 - 5x + 6."""
        return cls(Fraction(tok.strip()) for tok in text.split(",") if tok.strip())

    def format(self) -> str:
        return ",".join(str(c) for c in self.coeffs) or "0"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return RationalPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = RationalPoly((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        other = _coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RationalPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return RationalPoly(quot), RationalPoly(rem[:len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        return not (_coerce(other) % self)

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, A):
        """Exact value of the polynomial at a square matrix (Fraction entries)."""
        rows = [[Fraction(v) for v in row] for row in as_matrix(A).rows]
        d = len(rows)
        acc = [[Fraction(0)] * d for _ in range(d)]
        for c in reversed(self.coeffs):
            acc = [[sum(acc[i][k] * rows[k][j] for k in range(d)) for j in range(d)]
                   for i in range(d)]
            for i in range(d):
                acc[i][i] += c
        return acc

    def monic(self) -> "RationalPoly":
        if not self.coeffs:
            return self
        return RationalPoly(c / self.coeffs[-1] for c in self.coeffs)

    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def reversed(self) -> "RationalPoly":
        """x^deg * p(1/x)."""
        return RationalPoly(reversed(self.coeffs))

    def primitive(self) -> "RationalPoly":
        """Integer content-free multiple with positive leading coefficient."""
        if not self.coeffs:
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        sign = 1 if ints[-1] > 0 else -1
        return RationalPoly(sign * v // g for v in ints)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> tuple:
        if not self.is_integral():
            raise ValueError("polynomial has non-integer coefficients")
        return tuple(int(c) for c in self.coeffs)

    def __repr__(self):
        return f"RationalPoly({self.format()})"


def _coerce(p) -> RationalPoly:
    if isinstance(p, RationalPoly):
        return p
    return RationalPoly((p,))


def poly_gcd(f: RationalPoly, g: RationalPoly) -> RationalPoly:
    """Monic gcd (zero if both are zero)."""
    while g:
        f, g = g, f % g
    return f.monic()


def char_poly(A) -> RationalPoly:
    """det(xI - A) by Faddeev-LeVerrier; all divisions are exact in Z."""
    A = as_matrix(A)
    d = A.dim
    rows = A.rows
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    M = [[0] * d for _ in range(d)]
    for k in range(1, d + 1):
        # M_k = A M_{k-1} + c_{d-k+1} I
        M = [[sum(rows[i][t] * M[t][j] for t in range(d)) for j in range(d)]
             for i in range(d)]
        for i in range(d):
            M[i][i] += coeffs[d - k + 1]
        AM_trace = sum(rows[i][t] * M[t][i] for i in range(d) for t in range(d))
        c, rem = divmod(-AM_trace, k)
        assert rem == 0
        coeffs[d - k] = c
    return RationalPoly(coeffs)


@dataclass(frozen=True)
class FactoredPoly:
    unit: Fraction
    factors: tuple  # ((monic irreducible RationalPoly, multiplicity), ...)

    def expand(self) -> RationalPoly:
        p = RationalPoly((self.unit,))
        for f, e in self.factors:
            p = p * f ** e
        return p


def factor_over_Q(p: RationalPoly, degree_cap: int = FACTOR_DEGREE_CAP) -> FactoredPoly:
    """Irreducible factorization over Q, factors monic and sorted canonically."""
    import sympy

    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.degree > degree_cap:
        raise DegreeCapError(f"degree {p.degree} exceeds factorization cap {degree_cap}")
    x = sympy.Symbol("x")
    expr = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                       for c in reversed(p.coeffs)], x, domain="QQ")
    _, items = expr.factor_list()
    factors = []
    for f, e in items:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        factors.append((RationalPoly(coeffs).monic(), e))
    factors.sort(key=lambda fe: (fe[0].degree, fe[0].coeffs))
    return FactoredPoly(p.lead, tuple(factors))


@dataclass(frozen=True)
class InvariantFactors:
    factors: tuple  # monic, f_1 | f_2 | ... | f_s, constants dropped

    def product(self) -> RationalPoly:
        p = RationalPoly((1,))
        for f in self.factors:
            p = p * f
        return p

    @property
    def minimal_polynomial(self) -> RationalPoly:
        return self.factors[-1]

    def block_count(self, g: RationalPoly) -> int:
        """Jordan blocks per root of the irreducible ``g``."""
        return sum(1 for f in self.factors if g.divides(f))


def invariant_factors(A) -> InvariantFactors:
    """Smith form of xI - A over Q[x].

    Pivots are entries of minimal degree, ties broken by first position in
    row-major order, so the output is deterministic.
    """
    A = as_matrix(A)
    d = A.dim
    a = [[RationalPoly((Fraction(-A[i, j]), Fraction(1)) if i == j else (-A[i, j],))
          for j in range(d)] for i in range(d)]
    diag = []
    for t in range(d):
        while True:
            best = None
            for i in range(t, d):
                for j in range(t, d):
                    if a[i][j] and (best is None or a[i][j].degree < best[0]):
                        best = (a[i][j].degree, i, j)
            if best is None:
                diag.extend([RationalPoly()] * (d - t))
                break
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, d):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, d):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a:
                        row[j] = row[j] - q * row[t]
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next((i for i in range(t + 1, d) for j in range(t + 1, d)
                        if a[i][j] % p), None)
            if bad is None:
                diag.append(p.monic())
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        if len(diag) == d:
            break
    return InvariantFactors(tuple(f for f in diag if f.degree > 0))


def resultant(f: RationalPoly, g: RationalPoly) -> Fraction:
    """Res(f, g) via the Euclidean remainder sequence."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial")
    res = Fraction(1)
    while True:
        m, n = f.degree, g.degree
        if n == 0:
            return res * g.lead ** m
        r = f % g
        if r.is_zero():
            return Fraction(0)
        # Res(f, g) = (-1)^{mn} lc(g)^{m - deg r} Res(g, r)
        res *= (-1) ** (m * n) * g.lead ** (m - r.degree)
        f, g = g, r


@lru_cache(maxsize=None)
def _cyclotomic_int(n: int) -> tuple:
    # x^n - 1 divided by every Phi_k with k | n, k < n
    p = RationalPoly([-1] + [0] * (n - 1) + [1])
    for k in range(1, n):
        if n % k == 0:
            p = p // RationalPoly(_cyclotomic_int(k))
    return p.int_coeffs()


def cyclotomic(n: int) -> RationalPoly:
    return RationalPoly(_cyclotomic_int(n))


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def is_cyclotomic(f: RationalPoly):
    """Return n if the monic irreducible ``f`` equals Phi_n, else None.

    phi(n) >= sqrt(n/2), so every candidate n lies below 2 deg(f)^2 + 1.
    """
    f = f.monic()
    if f.degree < 1 or not f.is_integral():
        return None
    deg = f.degree
    if abs(f.coeffs[0]) != 1:
        return None
    for n in range(1, 2 * deg * deg + 2):
        if euler_phi(n) == deg and cyclotomic(n) == f:
            return n
    return None
