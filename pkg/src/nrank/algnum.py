"""Eigenvalues as exact algebraic numbers.

An :class:`AlgebraicNumber` is a primitive integer minimal polynomial plus
a rectangle with rational corners holding exactly one of its roots.
Floating point (mpmath) is only used transiently, to isolate roots and to
bound heights; stored state is exact.

Root isolation uses Newton inclusion discs: for a degree-n polynomial p and
any z, the disc |w - z| <= n |p(z) / p'(z)| contains a root.  When the n
discs around the approximate roots are pairwise disjoint each holds exactly
one root.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath
from mpmath import mp

from .poly import RationalPoly, factor_over_Q, is_cyclotomic

MAX_PRECISION = 2048
DEFAULT_BOUND = 64


class DependencePrecisionError(ArithmeticError):
    """Height intervals never isolated a single candidate exponent ratio."""


class IsolationError(ArithmeticError):
    pass


def _to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0:
        return Fraction(0)
    man = -man if sign else man
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


@lru_cache(maxsize=512)
def _isolate(coeffs: tuple, prec: int):
    """Approximate roots of the squarefree integer polynomial ``coeffs``.

    Returns ((z, radius), ...) sorted by (real, imag); every disc holds
    exactly one root.
    """
    n = len(coeffs) - 1
    desc = list(reversed(coeffs))
    work = prec
    for _ in range(6):
        with mp.workprec(work + 32):
            try:
                roots = mp.polyroots(desc, maxsteps=200 + 20 * n, extraprec=2 * work,
                                     cleanup=True)
            except mpmath.libmp.NoConvergence:
                work *= 2
                continue
            if n == 1:
                roots = [roots] if not isinstance(roots, list) else roots
            out = []
            floor = mpmath.mpf(2) ** (-prec)
            for z in roots:
                z = mpmath.mpc(z)
                # a few Newton polishing steps
                for _ in range(3):
                    v, dv = mp.polyval(desc, z, derivative=True)
                    if dv == 0:
                        break
                    z = z - v / dv
                v, dv = mp.polyval(desc, z, derivative=True)
                rad = floor if dv == 0 else 2 * n * abs(v) / abs(dv) + floor
                out.append((z, rad))
            ok = all(abs(out[i][0] - out[j][0]) > out[i][1] + out[j][1]
                     for i in range(n) for j in range(i + 1, n))
            if ok:
                out.sort(key=lambda zr: (zr[0].real, zr[0].imag))
                return tuple(out)
        work *= 2
    raise IsolationError(f"could not isolate roots of {coeffs}")


@dataclass(frozen=True)
class AlgebraicNumber:
    """A root of ``minpoly`` pinned down by ``box = (re_lo, re_hi, im_lo, im_hi)``."""

    minpoly: RationalPoly
    box: tuple

    @classmethod
    def rational(cls, value) -> "AlgebraicNumber":
        v = Fraction(value)
        return cls(RationalPoly((-v.numerator, v.denominator)), (v, v, Fraction(0), Fraction(0)))

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational number")
        c0, c1 = self.minpoly.coeffs
        return -c0 / c1

    def _center(self):
        re_lo, re_hi, im_lo, im_hi = self.box
        return mpmath.mpc(_mpf((re_lo + re_hi) / 2), _mpf((im_lo + im_hi) / 2))

    def approx(self, prec: int = 64):
        """(z, radius) with the root inside the disc of that radius around z."""
        if self.is_rational:
            v = self.value
            with mp.workprec(prec + 16):
                return mpmath.mpc(_mpf(v)), mpmath.mpf(2) ** -prec
        roots = _isolate(self.minpoly.int_coeffs(), prec)
        with mp.workprec(prec + 16):
            c = self._center()
            return min(roots, key=lambda zr: abs(zr[0] - c))

    def to_json(self) -> dict:
        return {"minpoly": [str(c) for c in self.minpoly.coeffs],
                "box": [str(v) for v in self.box]}

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicNumber({self.value})"
        z, _ = self.approx(53)
        return f"AlgebraicNumber(root of {self.minpoly.format()} near {complex(z):.6g})"


def roots_of(p: RationalPoly, prec: int = 64) -> list:
    """All roots of an irreducible polynomial as isolated AlgebraicNumbers."""
    p = p.primitive()
    if p.degree == 1:
        return [AlgebraicNumber(p, (v, v, Fraction(0), Fraction(0)))
                for v in [-p.coeffs[0] / p.coeffs[1]]]
    out = []
    for z, rad in _isolate(p.int_coeffs(), prec):
        with mp.workprec(prec + 32):
            box = tuple(_to_fraction(v) for v in
                        (z.real - rad, z.real + rad, z.imag - rad, z.imag + rad))
        out.append(AlgebraicNumber(p, box))
    return out


@dataclass(frozen=True)
class HeightInterval:
    lo: mpmath.mpf
    hi: mpmath.mpf

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def is_zero(self) -> bool:
        return self.lo == 0 and self.hi == 0


def _is_unit_root(alpha: AlgebraicNumber):
    p = alpha.minpoly
    if p.degree == 1 and abs(p.coeffs[0]) in (0, p.coeffs[1]):
        return True
    return p.is_integral() and p.lead == 1 and is_cyclotomic(p) is not None


def weil_height(alpha: AlgebraicNumber, precision: int = 64) -> HeightInterval:
    """Interval around h(alpha) = (log|lead| + sum log+|root|) / deg.

    Width stays below 2**(1 - precision/2).  Roots of unity, 0 and +-1 give
    the exact interval [0, 0].
    """
    if precision < 32:
        raise ValueError("precision must be >= 32 bits")
    if _is_unit_root(alpha):
        return HeightInterval(mpmath.mpf(0), mpmath.mpf(0))
    p = alpha.minpoly.primitive()
    coeffs = p.int_coeffs()
    target = mpmath.mpf(2) ** (1 - precision / 2)
    prec = precision
    while True:
        roots = ([(mpmath.mpc(mpmath.mpf(-coeffs[0]) / coeffs[1]), mpmath.mpf(0))]
                 if p.degree == 1 else _isolate(coeffs, prec))
        with mp.workprec(prec + 32):
            lo = hi = mpmath.log(abs(coeffs[-1]))
            for z, rad in roots:
                a = abs(z)
                lo += mpmath.log(max(a - rad, 1))
                hi += mpmath.log(max(a + rad, 1))
            slack = mpmath.mpf(2) ** (-prec)
            lo = max((lo / p.degree) - slack, 0)
            hi = hi / p.degree + slack
        if hi - lo < target:
            return HeightInterval(lo, hi)
        prec *= 2


def is_root_of_unity(alpha: AlgebraicNumber):
    """Order n if alpha is a primitive n-th root of unity, else None."""
    p = alpha.minpoly
    if not (p.is_integral() and p.lead == 1):
        return None
    return is_cyclotomic(p)


# -- multiplicative dependence ------------------------------------------------

@dataclass(frozen=True)
class DependenceWitness:
    """alpha**a1 * beta**a2 == 1, verified exactly."""

    a1: int
    a2: int

    dependent = True


@dataclass(frozen=True)
class Independent:
    """No relation found.  ``searched_bound`` is None when the verdict is exact."""

    searched_bound: int | None = None

    dependent = False

    @property
    def exact(self) -> bool:
        return self.searched_bound is None


def _factor_rational(v: Fraction) -> tuple:
    import sympy

    exps = {}
    for prime, e in sympy.factorint(abs(v.numerator)).items():
        exps[prime] = exps.get(prime, 0) + e
    for prime, e in sympy.factorint(v.denominator).items():
        exps[prime] = exps.get(prime, 0) - e
    return (-1 if v < 0 else 1), {p: e for p, e in exps.items() if e}


def _rational_dependence(x: Fraction, y: Fraction):
    sx, u = _factor_rational(x)
    sy, v = _factor_rational(y)
    if set(u) != set(v) or not u:
        return Independent()
    p0 = next(iter(u))
    g = gcd(u[p0], v[p0])
    a1, a2 = v[p0] // g, -u[p0] // g
    if any(a1 * u[p] + a2 * v[p] for p in u):
        return Independent()
    if a1 < 0:
        a1, a2 = -a1, -a2
    if sx ** (a1 % 2) * sy ** (a2 % 2) == -1:
        a1, a2 = 2 * a1, 2 * a2
    return DependenceWitness(a1, a2)


def _power_sums(p: RationalPoly, K: int) -> list:
    """[P_1, ..., P_K] with P_k the sum of k-th powers of the roots of p."""
    p = p.monic()
    n = p.degree
    c = p.coeffs  # c[n] == 1
    P = [Fraction(n)]
    for k in range(1, K + 1):
        s = Fraction(0)
        for i in range(1, min(k, n) + 1):
            ci = c[n - i]
            if ci and i < k:
                s += ci * P[k - i]
        if k <= n:
            s += k * c[n - k]
        P.append(-s)
    return P[1:]


def _poly_from_power_sums(P: list, D: int) -> RationalPoly:
    e = [Fraction(1)]
    for k in range(1, D + 1):
        s = Fraction(0)
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * P[i - 1]
        e.append(s / k)
    return RationalPoly([(-1) ** k * e[k] for k in range(D, -1, -1)])


def power_poly(p: RationalPoly, a: int) -> RationalPoly:
    """Monic polynomial whose roots are the a-th powers of the roots of p.

    Equals Res_y(p(y), x - y^a) up to normalization.
    """
    if a == 0:
        return RationalPoly((-1, 1)) ** p.degree
    if a < 0:
        p, a = p.reversed(), -a
    return _poly_from_power_sums(_power_sums(p, a * p.degree)[a - 1::a], p.degree)


def power_product_poly(p: RationalPoly, a: int, q: RationalPoly, b: int) -> RationalPoly:
    """Monic polynomial with roots alpha_i**a * beta_j**b over all root pairs."""
    pa, qb = power_poly(p, a), power_poly(q, b)
    D = pa.degree * qb.degree
    Pa, Qb = _power_sums(pa, D), _power_sums(qb, D)
    return _poly_from_power_sums([x * y for x, y in zip(Pa, Qb)], D)


def _combo_value(alpha, a, beta, b, prec):
    with mp.workprec(prec + 32):
        za, _ = alpha.approx(prec)
        zb, _ = beta.approx(prec)
        return za ** a * zb ** b


def combo_minpoly(alpha: AlgebraicNumber, a: int, beta: AlgebraicNumber, b: int,
                  prec: int = 128) -> RationalPoly:
    """Minimal polynomial (monic) of alpha**a * beta**b.

    The irreducible factor is picked by locating the numerical value among
    the isolated roots of each candidate factor; precision is raised until
    exactly one factor has a root disc containing it.
    """
    F = power_product_poly(alpha.minpoly, a, beta.minpoly, b)
    factors = [f for f, _ in factor_over_Q(F, degree_cap=max(F.degree, 24)).factors]
    while prec <= 4 * MAX_PRECISION:
        mu = _combo_value(alpha, a, beta, b, prec)
        hits = []
        with mp.workprec(prec + 32):
            tol = mpmath.mpf(2) ** (-prec // 2) * (1 + abs(mu))
            for f in factors:
                if f.degree == 1:
                    r = -f.coeffs[0] / f.coeffs[1]
                    d = abs(mu - _mpf(r))
                    if d <= tol:
                        hits.append(f)
                    continue
                for z, rad in _isolate(f.primitive().int_coeffs(), prec):
                    if abs(mu - z) <= rad + tol:
                        hits.append(f)
                        break
        if len(hits) == 1:
            return hits[0]
        prec *= 2
    raise DependencePrecisionError("could not identify the minimal polynomial factor")


def _candidate_ratios(lo, hi, bound: int) -> list:
    out = []
    for t in range(1, bound + 1):
        s_lo = int(mpmath.ceil(lo * t))
        s_hi = int(mpmath.floor(hi * t))
        for s in range(max(s_lo, 1), s_hi + 1):
            if gcd(s, t) == 1:
                out.append((s, t))
    return out


def verify_witness(alpha, beta, w: DependenceWitness) -> bool:
    return combo_minpoly(alpha, w.a1, beta, w.a2) == RationalPoly((-1, 1))


def mult_dependent(alpha: AlgebraicNumber, beta: AlgebraicNumber,
                   bound: int = DEFAULT_BOUND, precision: int = 64):
    """Decide whether alpha**a1 * beta**a2 == 1 for some (a1, a2) != (0, 0).

    Returns a :class:`DependenceWitness` or :class:`Independent`.  For two
    rationals the answer is exact.  Otherwise, any relation forces
    |a1| h(alpha) = |a2| h(beta); candidate ratios s/t with t <= ``bound``
    are read off the height intervals and alpha**t * beta**(+-s) is tested
    for being a root of unity.  "Independent" then means "no relation with
    |a1| / gcd <= bound".
    """
    for x in (alpha, beta):
        if x.minpoly.is_zero() or (x.is_rational and x.value == 0):
            raise ValueError("multiplicative dependence needs nonzero inputs")
    n = is_root_of_unity(alpha)
    if n is not None:
        return DependenceWitness(n, 0)
    n = is_root_of_unity(beta)
    if n is not None:
        return DependenceWitness(0, n)
    if alpha.is_rational and beta.is_rational:
        return _rational_dependence(alpha.value, beta.value)

    prec = max(precision, 64)
    while True:
        ha, hb = weil_height(alpha, prec), weil_height(beta, prec)
        with mp.workprec(prec + 32):
            lo, hi = ha.lo / hb.hi, ha.hi / hb.lo
        cands = _candidate_ratios(lo, hi, bound)
        if not cands:
            return Independent(bound)
        if len(cands) == 1:
            break
        prec *= 2
        if prec > MAX_PRECISION:
            raise DependencePrecisionError(
                f"height ratio interval [{lo}, {hi}] still holds {len(cands)} candidates")
    s, t = cands[0]
    for sign in (-1, 1):
        f = combo_minpoly(alpha, t, beta, sign * s)
        T = is_cyclotomic(f) if f.is_integral() else None
        if T is not None:
            w = DependenceWitness(t * T, sign * s * T)
            if not verify_witness(alpha, beta, w):
                raise ArithmeticError(f"witness {w} failed exact verification")
            return w
    return Independent(bound)


@dataclass
class DependencePartition:
    classes: list                       # list of sorted index lists
    results: dict = field(default_factory=dict)   # (i, j) -> witness / Independent

    def witness(self, i: int, j: int):
        if (i, j) in self.results:
            return self.results[i, j]
        r = self.results[j, i]
        if isinstance(r, DependenceWitness):
            return DependenceWitness(r.a2, r.a1)
        return r

    @property
    def bounded(self) -> int | None:
        """Largest search bound behind any "Independent" verdict, if inexact."""
        bounds = [r.searched_bound for r in self.results.values()
                  if isinstance(r, Independent) and r.searched_bound is not None]
        return max(bounds) if bounds else None


def dependence_classes(nums: list, bound: int = DEFAULT_BOUND, precision: int = 64,
                       workers: int = 1) -> DependencePartition:
    """Partition non-root-of-unity numbers by pairwise multiplicative dependence."""
    for x in nums:
        if is_root_of_unity(x) is not None:
            raise ValueError("roots of unity must be filtered out before classing")
    pairs = [(i, j) for i in range(len(nums)) for j in range(i + 1, len(nums))]

    def test(ij):
        i, j = ij
        return ij, mult_dependent(nums[i], nums[j], bound, precision)

    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(test, pairs))
    else:
        results = dict(map(test, pairs))

    parent = list(range(len(nums)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (i, j), r in sorted(results.items()):
        if isinstance(r, DependenceWitness):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(len(nums)):
        groups.setdefault(find(i), []).append(i)
    return DependencePartition(sorted(groups.values()), results)


def torus_rank_rational(nums) -> int:
    """Rank of the multiplicative group generated by nonzero rationals.

    Signs are torsion and do not count.
    """
    vectors = []
    for x in nums:
        if isinstance(x, AlgebraicNumber):
            if not x.is_rational:
                raise ValueError("torus rank is only implemented for rational inputs")
            x = x.value
        if not isinstance(x, (int, Fraction)):
            raise ValueError(f"non-rational input {x!r}")
        x = Fraction(x)
        if x == 0:
            raise ValueError("zero has no multiplicative exponent vector")
        vectors.append(_factor_rational(x)[1])
    primes = sorted({p for v in vectors for p in v})
    rows = [[Fraction(v.get(p, 0)) for p in primes] for v in vectors]
    rank = 0
    ncols = len(primes)
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank
