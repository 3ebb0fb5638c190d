"""Finite fields, short Weierstrass curves and Frobenius traces.

Field elements of F_{p^k} are ints in [0, p^k) holding the base-p digits of
the coefficient vector (lowest degree first), so x = 1 + 2t is ``1 + 2*p``.
Multiplication goes through discrete log / antilog tables, which bounds the
field size to ``FIELD_TABLE_LIMIT`` elements.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, lcm

from .linalg import IntegerMatrix

FIELD_TABLE_LIMIT = 1 << 22
EXHAUSTIVE_LIMIT = 10 ** 5
SAMPLING_LIMIT = 10 ** 7
CLOSURE_EXPONENTS = (1, 2, 3, 4, 5, 6, 8, 10, 12)


class BudgetExceeded(RuntimeError):
    pass


def _factorint(n: int) -> dict:
    import sympy

    return sympy.factorint(n)


def _is_prime(n: int) -> bool:
    import sympy

    return sympy.isprime(n)


# -- polynomials over F_p as coefficient lists (ascending) ---------------------

def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = a[:dm] if len(a) > dm else a
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _pgcd(a, b, p):
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, p), m, p)
    return result


def is_irreducible_mod_p(m, p: int) -> bool:
    """Rabin's test for a monic polynomial (ascending coefficients) over F_p."""
    k = len(m) - 1
    if k == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p ** k, m, p) != _pmod(x, m, p):
        return False
    for q in _factorint(k):
        h = _psub(_ppowmod(x, p ** (k // q), m, p), x, p)
        if len(_pgcd(m, h, p)) != 1:
            return False
    return True


def find_irreducible(p: int, k: int) -> tuple:
    """First monic irreducible of degree k over F_p in a fixed search order."""
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        if low[0] == 0:
            continue
        m = low + [1]
        if is_irreducible_mod_p(m, p):
            return tuple(m)
    raise ArithmeticError("no irreducible polynomial found")


# -- fields -------------------------------------------------------------------

class FiniteField:
    """F_{p^k} with table-driven multiplication."""

    def __init__(self, p: int, k: int = 1, modulus: tuple | None = None):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p, self.k, self.q = p, k, p ** k
        if self.q > FIELD_TABLE_LIMIT:
            raise BudgetExceeded(f"field of size {self.q} exceeds table limit {FIELD_TABLE_LIMIT}")
        self.modulus = tuple(modulus) if modulus is not None else find_irreducible(p, k)
        if len(self.modulus) != k + 1 or not is_irreducible_mod_p(list(self.modulus), p):
            raise ValueError("modulus is not irreducible of the right degree")
        self._build_tables()

    def __repr__(self):
        return f"FiniteField({self.p}^{self.k})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def to_digits(self, a: int) -> list:
        p = self.p
        return [(a // p ** i) % p for i in range(self.k)]

    def from_digits(self, ds) -> int:
        out = 0
        for i, c in enumerate(ds):
            out += (c % self.p) * self.p ** i
        return out

    def _poly_mul(self, a: int, b: int) -> int:
        prod = _pmod(_pmul(self.to_digits(a), self.to_digits(b), self.p), list(self.modulus), self.p)
        return self.from_digits(prod)

    def _build_tables(self):
        q = self.q
        order = q - 1
        primes = list(_factorint(order)) if order > 1 else []
        g = None
        for cand in range(1, q):
            if self.k == 1:
                ok = all(pow(cand, order // r, self.p) != 1 for r in primes)
            else:
                digits = self.to_digits(cand)
                ok = all(_ppowmod(digits, order // r, list(self.modulus), self.p) != [1]
                         for r in primes)
            if ok:
                g = cand
                break
        self.generator = g
        exp = [0] * order
        log = [0] * q
        cur = 1
        for i in range(order):
            exp[i] = cur
            log[cur] = i
            cur = cur * g % self.p if self.k == 1 else self._poly_mul(cur, g)
        self._exp, self._log = exp, log

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        # a + b = a (1 + b/a); adding 1 only touches the lowest digit
        c = self._exp[(self._log[b] - self._log[a]) % (self.q - 1)]
        p = self.p
        c1 = c - c % p + (c % p + 1) % p
        return self.mul(a, c1)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self.mul(a, self.p - 1)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._exp[-self._log[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self._exp[self._log[a] * e % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n (prime subfield)."""
        return n % self.p

    def is_square(self, a: int) -> bool:
        return a == 0 or self._log[a] % 2 == 0

    def sqrt(self, a: int) -> int | None:
        if a == 0:
            return 0
        e = self._log[a]
        if e % 2:
            return None
        return self._exp[e // 2]

    def chi(self, a: int) -> int:
        """Quadratic character."""
        if a == 0:
            return 0
        return 1 if self._log[a] % 2 == 0 else -1

    def elements(self):
        return range(self.q)


@lru_cache(maxsize=64)
def field(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)


@lru_cache(maxsize=64)
def _embedding(p: int, k: int, n: int) -> tuple:
    """Images of t^0..t^(k-1) of F_{p^k} inside F_{p^(kn)}."""
    small, big = field(p, k), field(p, k * n)
    if n == 1:
        return tuple(small.from_digits([int(i == j) for j in range(k)]) for i in range(k))
    if k == 1:
        return (1,)
    m = small.modulus
    for z in range(1, big.q):
        acc = 0
        for c in reversed(m):
            acc = big.add(big.mul(acc, z), c)
        if acc == 0:
            powers = [1]
            for _ in range(k - 1):
                powers.append(big.mul(powers[-1], z))
            return tuple(powers)
    raise ArithmeticError("base modulus has no root in the extension")


def embed(p: int, k: int, n: int, a: int) -> int:
    big = field(p, k * n)
    images = _embedding(p, k, n)
    out = 0
    for c, img in zip(field(p, k).to_digits(a), images):
        if c:
            out = big.add(out, big.mul(c, img))
    return out


# -- curves -------------------------------------------------------------------

INF = None


class NotOnCurveError(ValueError):
    pass


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 = x^3 + a x + b over F_{p^k}, p >= 5."""

    p: int
    k: int
    a: int
    b: int

    def __post_init__(self):
        if self.p < 5:
            raise ValueError("characteristic must be >= 5")
        F = self.field
        a, b = F.from_digits(F.to_digits(self.a)), F.from_digits(F.to_digits(self.b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        disc = F.add(F.mul(4, F.pow(a, 3)), F.mul(27 % self.p, F.mul(b, b)))
        if disc == 0:
            raise ValueError("singular curve: 4a^3 + 27b^2 = 0")

    @classmethod
    def parse(cls, spec: str) -> "EllipticCurve":
        """Parse ``"p^k:a,b"`` (or ``"p:a,b"``); a, b use the digit encoding."""
        head, coeffs = spec.split(":")
        p, _, k = head.partition("^")
        a, b = (int(v) for v in coeffs.split(","))
        return cls(int(p), int(k or 1), a, b)

    def format(self) -> str:
        return f"{self.p}^{self.k}:{self.a},{self.b}"

    @property
    def field(self) -> FiniteField:
        return field(self.p, self.k)

    @property
    def q(self) -> int:
        return self.p ** self.k

    def base_change(self, n: int) -> "EllipticCurve":
        if n == 1:
            return self
        return EllipticCurve(self.p, self.k * n, embed(self.p, self.k, n, self.a),
                             embed(self.p, self.k, n, self.b))

    def rhs(self, x: int) -> int:
        F = self.field
        return F.add(F.add(F.pow(x, 3), F.mul(self.a, x)), self.b)

    def on_curve(self, P) -> bool:
        if P is INF:
            return True
        x, y = P
        F = self.field
        return F.mul(y, y) == self.rhs(x)

    def quadratic_twist(self, c: int | None = None) -> "EllipticCurve":
        F = self.field
        if c is None:
            c = next(v for v in range(2, F.q) if not F.is_square(v))
        c2 = F.mul(c, c)
        return EllipticCurve(self.p, self.k, F.mul(c2, self.a), F.mul(F.mul(c2, c), self.b))


def ec_add(E: EllipticCurve, P, Q):
    """Chord-and-tangent sum; ``None`` is the point at infinity."""
    if not (E.on_curve(P) and E.on_curve(Q)):
        raise NotOnCurveError("point not on curve")
    return _add(E.field, E.a, P, Q)


def _add(F, a, P, Q):
    if P is INF:
        return Q
    if Q is INF:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if F.add(y1, y2) == 0:
            return INF
        num = F.add(F.mul(3, F.mul(x1, x1)), a)
        lam = F.mul(num, F.inv(F.add(y1, y1)))
    else:
        lam = F.mul(F.sub(y2, y1), F.inv(F.sub(x2, x1)))
    x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
    y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
    return (x3, y3)


def ec_mul(E: EllipticCurve, n: int, P):
    F, a = E.field, E.a
    if n < 0:
        n, P = -n, (P if P is INF else (P[0], F.neg(P[1])))
    R = INF
    while n:
        if n & 1:
            R = _add(F, a, R, P)
        n >>= 1
        if n:
            P = _add(F, a, P, P)
    return R


def point_count_naive(E: EllipticCurve, n: int = 1, budget: int = SAMPLING_LIMIT) -> int:
    """#E(F_{q^n}) by summing the quadratic character over every x."""
    if E.q ** n > budget:
        raise BudgetExceeded(f"q^n = {E.q ** n} exceeds counting budget {budget}")
    En = E.base_change(n)
    F = En.field
    return 1 + sum(1 + F.chi(En.rhs(x)) for x in range(F.q))


def iter_points(E: EllipticCurve):
    yield INF
    F = E.field
    for x in range(F.q):
        y = F.sqrt(E.rhs(x))
        if y is None:
            continue
        yield (x, y)
        if y:
            yield (x, F.neg(y))


# -- traces -------------------------------------------------------------------

@dataclass(frozen=True)
class TraceSequence:
    t: int
    q: int

    def __post_init__(self):
        if self.t * self.t > 4 * self.q:
            raise ValueError(f"trace {self.t} violates the Hasse bound for q={self.q}")

    def value(self, n: int) -> int:
        return trace_power(self, n)

    def card(self, n: int) -> int:
        return card_extension(self, n)


def trace(E: EllipticCurve) -> int:
    return E.q + 1 - point_count_naive(E)


def trace_power(ts: TraceSequence, n: int) -> int:
    """t_n = alpha^n + beta^n via t_n = t t_{n-1} - q t_{n-2}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    prev, cur = 2, ts.t
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, ts.t * cur - ts.q * prev
    return cur


def card_extension(ts: TraceSequence, n: int) -> int:
    return ts.q ** n + 1 - trace_power(ts, n)


def trace_sequence(E: EllipticCurve) -> TraceSequence:
    return TraceSequence(trace(E), E.q)


def is_ordinary(E: EllipticCurve) -> bool:
    return gcd(trace(E), E.p) == 1


def is_isogenous(E1: EllipticCurve, E2: EllipticCurve) -> bool:
    if (E1.p, E1.k) != (E2.p, E2.k):
        raise ValueError("curves are over different fields")
    return trace(E1) == trace(E2)


def closure_exponent(t1: int, t2: int, q: int) -> int | None:
    s1, s2 = TraceSequence(t1, q), TraceSequence(t2, q)
    for a in CLOSURE_EXPONENTS:
        if trace_power(s1, a) == trace_power(s2, a):
            return a
    return None


def is_isogenous_closure(E1: EllipticCurve, E2: EllipticCurve) -> int | None:
    """Least a in {1,2,3,4,5,6,8,10,12} with equal point counts over F_{q^a}."""
    if (E1.p, E1.k) != (E2.p, E2.k):
        raise ValueError("curves are over different fields")
    return closure_exponent(trace(E1), trace(E2), E1.q)


# -- group structure ----------------------------------------------------------

@dataclass(frozen=True)
class GroupStructure:
    m: int
    l: int
    card: int
    mode: str = "exhaustive"   # exhaustive | sampling | upper-bound

    @property
    def cyclic(self) -> bool:
        return self.m == 1


def point_order(E: EllipticCurve, P, card: int, card_factors: dict) -> int:
    o = card
    for ell, e in card_factors.items():
        for _ in range(e):
            if ec_mul(E, o // ell, P) is INF:
                o //= ell
            else:
                break
    return o


def _random_point(E: EllipticCurve, rng: random.Random):
    F = E.field
    while True:
        x = rng.randrange(F.q)
        y = F.sqrt(E.rhs(x))
        if y is None:
            continue
        if y and rng.random() < 0.5:
            y = F.neg(y)
        return (x, y)


def structure_upper_bound(card: int, qn: int, tn: int) -> GroupStructure:
    m_bound = gcd(gcd(card, qn - 1), tn - 2)
    return GroupStructure(m_bound, card // m_bound, card, "upper-bound")


def group_structure(E: EllipticCurve, n: int = 1, seed: int = 0, min_samples: int = 8,
                    max_samples: int = 400, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                    sampling_limit: int = SAMPLING_LIMIT) -> GroupStructure:
    """(m, l) with E(F_{q^n}) = Z/m x Z/l and m | l.

    l is the lcm of orders of seeded random points; it is accepted once a
    point of order l exists, m = card / l divides l, q^n - 1 and t_n - 2.
    Up to ``exhaustive_limit`` points every point is then checked to be
    killed by l.  Past ``sampling_limit`` only the upper-bound mode is
    available: m divides gcd(card, q^n - 1, t_n - 2).
    """
    ts = trace_sequence(E)
    qn = E.q ** n
    card = card_extension(ts, n)
    tn = trace_power(ts, n)
    if qn > min(sampling_limit, FIELD_TABLE_LIMIT):
        return structure_upper_bound(card, qn, tn)
    En = E.base_change(n)
    factors = _factorint(card)
    rng = random.Random(seed)
    l = 1
    for i in range(max_samples):
        P = _random_point(En, rng)
        l = lcm(l, point_order(En, P, card, factors))
        m = card // l
        if (i + 1 >= min_samples and l % m == 0 and (qn - 1) % m == 0
                and (tn - 2) % m == 0):
            break
    else:
        raise ArithmeticError("group structure sampling did not converge")
    if m == 1:
        return GroupStructure(1, card, card, "exhaustive" if qn <= exhaustive_limit else "sampling")
    if qn <= exhaustive_limit:
        for P in iter_points(En):
            if ec_mul(En, l, P) is not INF:
                raise ArithmeticError("sampled exponent is not the group exponent")
        return GroupStructure(m, l, card, "exhaustive")
    return GroupStructure(m, l, card, "sampling")


def group_structure_exhaustive(E: EllipticCurve, n: int = 1) -> GroupStructure:
    """Structure from the orders of all points.  Test oracle for small fields."""
    En = E.base_change(n)
    pts = list(iter_points(En))
    card = len(pts)
    factors = _factorint(card)
    l = 1
    for P in pts:
        l = lcm(l, point_order(En, P, card, factors))
    return GroupStructure(card // l, l, card, "exhaustive")


# -- experiments --------------------------------------------------------------

@dataclass(frozen=True)
class ExponentPoint:
    n: int
    m: int
    l: int
    card: int
    mode: str
    ratio: float        # log l / (n log q)
    floor: float        # log(q^(n/2) - 1) / (n log q)


def exponent_growth_experiment(E: EllipticCurve, n_max: int, seed: int = 0,
                               sampling_limit: int = SAMPLING_LIMIT) -> list:
    out = []
    lq = math.log(E.q)
    for n in range(1, n_max + 1):
        gs = group_structure(E, n, seed=seed, sampling_limit=sampling_limit)
        half = E.q ** (n / 2) - 1
        floor = math.log(half) / (n * lq) if half > 1 else 0.0
        out.append(ExponentPoint(n, gs.m, gs.l, gs.card, gs.mode,
                                 math.log(gs.l) / (n * lq), floor))
    return out


def gcd_orders_experiment(t1: int, t2: int, q: int, n_max: int):
    """GrowthSeries of gcd(#E1(F_{q^n}), #E2(F_{q^n})) from the two traces."""
    from .order import GrowthPoint, GrowthSeries

    s1, s2 = TraceSequence(t1, q), TraceSequence(t2, q)
    return GrowthSeries([GrowthPoint(n, gcd(card_extension(s1, n), card_extension(s2, n)))
                         for n in range(1, n_max + 1)])


def gcd_orders_curves(E1: EllipticCurve, E2: EllipticCurve, n_max: int):
    if (E1.p, E1.k) != (E2.p, E2.k):
        raise ValueError("curves are over different fields")
    return gcd_orders_experiment(trace(E1), trace(E2), E1.q, n_max)


def frobenius_companion(t: int, q: int) -> IntegerMatrix:
    """Companion matrix of x^2 - t x + q."""
    return IntegerMatrix([[0, -q], [1, t]])


def frobenius_matrix(E: EllipticCurve, other: EllipticCurve | None = None) -> IntegerMatrix:
    """Frobenius companion of E, or the 4x4 block matrix for the pair (E, other)."""
    C = frobenius_companion(trace(E), E.q)
    if other is None:
        return C
    if (E.p, E.k) != (other.p, other.k):
        raise ValueError("curves are over different fields")
    return IntegerMatrix.block_diag(C, frobenius_companion(trace(other), other.q))
