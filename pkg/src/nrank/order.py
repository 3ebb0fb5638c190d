"""r-orders modulo N and gcd-growth experiments on A^n - I."""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, factorial, gcd, lcm

from .spectral import (
    EXCEPTIONAL,
    SpectralProfile,
    class_representative,
    classify,
    spectral_profile,
)
from .algnum import DependenceWitness, weil_height
from .linalg import (
    IntegerMatrix,
    _mul,
    all_minors_vanish_mod,
    as_matrix,
    det,
    det_bareiss,
    determinant_ideal_gen,
    mat_pow_mod,
)
from .poly import char_poly


@dataclass(frozen=True)
class OrderResult:
    value: int | None = None
    period: int | None = None
    preperiod: int | None = None

    @property
    def infinite(self) -> bool:
        return self.value is None

    def __str__(self):
        if self.infinite:
            return f"Infinite, period={self.period}, preperiod={self.preperiod}"
        return str(self.value)


def ord_r(A, N: int, r: int, max_states: int | None = None) -> OrderResult:
    """Least k with every (r+1)-minor of A^k - I divisible by N.

    Works entirely modulo N.  The powers A^k mod N are eventually periodic;
    if the cycle closes with no success the order is infinite and the
    detected period / preperiod of k -> A^k mod N are reported.
    """
    A = as_matrix(A)
    d = A.dim
    if N < 2:
        raise ValueError("N must be >= 2")
    if not 0 <= r <= d:
        raise ValueError(f"r={r} out of range [0, {d}]")
    if r == d:
        return OrderResult(1)
    base = A.mod(N).rows
    cur = base
    seen = {}
    k = 1
    while True:
        M = IntegerMatrix(cur).minus_identity()
        if all_minors_vanish_mod(M, r + 1, N):
            return OrderResult(k)
        if cur in seen:
            j = seen[cur]
            return OrderResult(None, period=k - j, preperiod=j - 1)
        seen[cur] = k
        if max_states is not None and len(seen) > max_states:
            raise MemoryError(f"more than {max_states} states of A^k mod {N}")
        cur = _mul(cur, base, N)
        k += 1


def _factorint(n: int) -> dict:
    import sympy

    return sympy.factorint(n)


def gl_order(d: int, N: int) -> int:
    """|GL_d(Z/N)|."""
    total = 1
    for p, e in _factorint(N).items():
        g = 1
        for i in range(d):
            g *= p ** d - p ** i
        total *= p ** ((e - 1) * d * d) * g
    return total


def matrix_order_mod(A, N: int) -> int:
    """Multiplicative order of A in GL_d(Z/N), from the group order downward."""
    A = as_matrix(A)
    if gcd(det(A), N) != 1:
        raise ValueError(f"matrix is singular modulo {N}")
    ident = IntegerMatrix.identity(A.dim).mod(N)
    k = gl_order(A.dim, N)
    for p in _factorint(k):
        while k % p == 0 and mat_pow_mod(A, k // p, N) == ident:
            k //= p
    return k


def ord0_matches_matrix_order(A, N: int):
    """(ord(A, N, 0) == order of A in GL_d(Z/N), that order)."""
    order = matrix_order_mod(A, N)
    return ord_r(A, N, 0).value == order, order


@dataclass(frozen=True)
class GrowthPoint:
    n: int
    gcd: int

    @property
    def log_gcd(self) -> float | None:
        """Natural log of the gcd; None when every minor vanishes (gcd 0)."""
        return math.log(self.gcd) if self.gcd > 0 else None


@dataclass
class GrowthSeries:
    points: list

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def at(self, n: int) -> GrowthPoint:
        for p in self.points:
            if p.n == n:
                return p
        raise KeyError(n)

    def slope(self, n_lo: int | None = None, n_hi: int | None = None):
        """Least-squares slope and RMS residual of log_gcd against n.

        Defaults to the top half of the series.  Zero-gcd points are skipped.
        """
        pts = [p for p in self.points if p.gcd > 0]
        if n_lo is None and n_hi is None:
            pts = pts[len(pts) // 2:]
        else:
            pts = [p for p in pts if (n_lo is None or p.n >= n_lo)
                   and (n_hi is None or p.n <= n_hi)]
        return fit_line([p.n for p in pts], [p.log_gcd for p in pts])


def fit_line(xs, ys):
    """(slope, rms residual) of an ordinary least-squares line."""
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two points to fit a slope")
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    icpt = my - slope * mx
    rms = math.sqrt(sum((y - icpt - slope * x) ** 2 for x, y in zip(xs, ys)) / n)
    return slope, rms


def gcd_growth_series(A, r: int, n_max: int, n_values=None) -> GrowthSeries:
    """gcd of all (r+1)-minors of A^n - I for n = 1..n_max (exact)."""
    A = as_matrix(A)
    if not 0 <= r < A.dim:
        raise ValueError("need r + 1 <= d")
    wanted = set(n_values) if n_values is not None else None
    points = []
    P = A
    for n in range(1, n_max + 1):
        if n > 1:
            P = P @ A
        if wanted is None or n in wanted:
            points.append(GrowthPoint(n, determinant_ideal_gen(P.minus_identity(), r + 1)))
    return GrowthSeries(points)


def invariants_of_power(A, n: int) -> list:
    """[alpha_{n,1}, ..., alpha_{n,d}] with det(xI - M) = sum (-1)^k alpha_{n,k} x^(d-k),
    M = A^n - I."""
    A = as_matrix(A)
    d = A.dim
    cp = char_poly((A ** n).minus_identity())
    return [int((-1) ** k * cp.coeffs[d - k]) for k in range(1, d + 1)]


def k_invariant(A, N: int, n_max: int) -> int | None:
    """Smallest n <= n_max with N | alpha_{n,k}^(d!/k) for every k; None if absent."""
    A = as_matrix(A)
    d = A.dim
    if N < 2:
        raise ValueError("N must be >= 2")
    df = factorial(d)
    for n in range(1, n_max + 1):
        alphas = invariants_of_power(A, n)
        if all(pow(abs(a), df // k, N) == 0 for k, a in enumerate(alphas, start=1)):
            return n
    return None


def _prime_support(v: int) -> dict:
    return _factorint(abs(v)) if abs(v) > 1 else {}


def check_lemma_inputs(lam: int, eta: int):
    if lam < 2:
        raise ValueError("lambda must be an integer >= 2")
    if eta in (1, -1):
        return
    u, v = _prime_support(lam), _prime_support(eta)
    if eta == 0 or set(u) != set(v):
        raise ValueError(f"{lam} and {eta} are not multiplicatively dependent")
    p0 = next(iter(u))
    if any(u[p] * v[p0] != v[p] * u[p0] for p in u):
        raise ValueError(f"{lam} and {eta} are not multiplicatively dependent")


def jordan_power_entry(eta: int, n: int, offset: int) -> int:
    """Entry at distance ``offset`` above the diagonal of B(eta)^n."""
    if offset > n:
        return 0
    return comb(n, offset) * eta ** (n - offset)


def lemma_minor(eta: int, n: int, k: int) -> int:
    """det C_{n,k}(eta): rows 1..k, columns 2..k+1 of B(eta)^n - I."""
    rows = []
    for i in range(k):
        row = []
        for j in range(1, k + 1):
            off = j - i
            if off == 0:
                row.append(eta ** n - 1)
            elif off > 0:
                row.append(jordan_power_entry(eta, n, off))
            else:
                row.append(0)
        rows.append(row)
    return det_bareiss(rows)


def lemma_gcd_check(lam: int, eta: int, k: int, n_max: int) -> GrowthSeries:
    """gcd(lam^n - 1, det C_{n,k}(eta)) for n = 1..n_max."""
    check_lemma_inputs(lam, eta)
    if k < 1:
        raise ValueError("k must be positive")
    return GrowthSeries([GrowthPoint(n, gcd(lam ** n - 1, lemma_minor(eta, n, k)))
                         for n in range(1, n_max + 1)])


@dataclass
class WitnessSeries:
    m: int
    representative: int          # eigen index of the class representative
    reference_slope: float       # h(lambda_1)
    series: GrowthSeries


def witness_modulus(prof: SpectralProfile, class_index: int, rep: int) -> int:
    """lcm of the root-of-unity orders and the exponents b_i in lambda_1^a_i = lambda_i^b_i."""
    m = prof.unity_lcm
    for i in prof.classes[class_index].members:
        if i == rep:
            continue
        w = prof.witness(rep, i)
        if not isinstance(w, DependenceWitness):
            # members joined through a chain; test the pair directly
            from .algnum import mult_dependent
            w = mult_dependent(prof.eigen[rep].value, prof.eigen[i].value)
            if not isinstance(w, DependenceWitness):
                raise ArithmeticError("class member not dependent on representative")
        m = lcm(m, abs(w.a2))
    return m


def exceptional_witness_series(A, r: int, n_max: int = 60,
                               profile: SpectralProfile | None = None) -> WitnessSeries:
    """Growth of the (r+1)-minor gcd along n = 0 mod m for an r-exceptional A."""
    A = as_matrix(A)
    prof = profile if profile is not None else spectral_profile(A)
    v = classify(A, r, profile=prof)
    if v.verdict != EXCEPTIONAL:
        raise ValueError(f"matrix is not {r}-exceptional (verdict {v.label})")
    rep = class_representative(prof, v.witness_class)
    m = witness_modulus(prof, v.witness_class, rep)
    h = weil_height(prof.eigen[rep].value, 64)
    series = gcd_growth_series(A, r, n_max, n_values=range(m, n_max + 1, m))
    return WitnessSeries(m, rep, float((h.lo + h.hi) / 2), series)
