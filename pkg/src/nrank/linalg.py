"""Exact integer matrix algebra.

Everything here works on arbitrary-precision Python ints.  Matrices are
immutable :class:`IntegerMatrix` values; most functions also accept a plain
nested list and coerce it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


class MatrixFormatError(ValueError):
    """Raised when matrix text cannot be parsed."""


@dataclass(frozen=True)
class IntegerMatrix:
    """Square matrix of Python ints, stored row-major as nested tuples."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        d = len(rows)
        if d == 0 or any(len(row) != d for row in rows):
            raise ValueError("IntegerMatrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, d: int) -> "IntegerMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @classmethod
    def diag(cls, *entries: int) -> "IntegerMatrix":
        d = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(d))
                         for i in range(d)))

    @classmethod
    def block_diag(cls, *blocks) -> "IntegerMatrix":
        blocks = [as_matrix(b) for b in blocks]
        d = sum(b.dim for b in blocks)
        out = [[0] * d for _ in range(d)]
        off = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                out[off + i][off:off + b.dim] = row
            off += b.dim
        return cls(out)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list:
        return [list(row) for row in self.rows]

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return IntegerMatrix(_mul(self.rows, as_matrix(other).rows))

    __mul__ = __matmul__

    def __add__(self, other):
        other = as_matrix(other)
        return IntegerMatrix([[a + b for a, b in zip(r, s)]
                              for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        other = as_matrix(other)
        return IntegerMatrix([[a - b for a, b in zip(r, s)]
                              for r, s in zip(self.rows, other.rows)])

    def scale(self, c: int) -> "IntegerMatrix":
        return IntegerMatrix([[c * a for a in r] for r in self.rows])

    def mod(self, n: int) -> "IntegerMatrix":
        return IntegerMatrix([[a % n for a in r] for r in self.rows])

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(list(zip(*self.rows)))

    def minus_identity(self) -> "IntegerMatrix":
        return IntegerMatrix([[a - (i == j) for j, a in enumerate(r)]
                              for i, r in enumerate(self.rows)])

    def __pow__(self, k: int) -> "IntegerMatrix":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = IntegerMatrix.identity(self.dim).rows
        base = self.rows
        while k:
            if k & 1:
                result = _mul(result, base)
            k >>= 1
            if k:
                base = _mul(base, base)
        return IntegerMatrix(result)

    def to_text(self) -> str:
        lines = [str(self.dim)]
        lines += [" ".join(str(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def as_matrix(A) -> IntegerMatrix:
    if isinstance(A, IntegerMatrix):
        return A
    return IntegerMatrix(A)


def parse_matrix(text: str) -> IntegerMatrix:
    """Parse the text format: a line with ``d`` followed by ``d`` rows."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MatrixFormatError("empty matrix text")
    try:
        d = int(lines[0])
        rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise MatrixFormatError(f"non-integer token: {exc}") from None
    if d < 1 or len(rows) != d or any(len(r) != d for r in rows):
        raise MatrixFormatError(f"expected {d} rows of {d} integers")
    return IntegerMatrix(rows)


def _mul(X, Y, mod: int | None = None):
    cols = list(zip(*Y))
    if mod is None:
        return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                     for row in X)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % mod for col in cols)
                 for row in X)


def mat_mul_mod(A, B, N: int) -> IntegerMatrix:
    return IntegerMatrix(_mul(as_matrix(A).rows, as_matrix(B).rows, N))


def mat_pow_mod(A, k: int, N: int) -> IntegerMatrix:
    """A**k with entries reduced to [0, N), by square-and-multiply."""
    if k < 1 or N < 2:
        raise ValueError("need k >= 1 and N >= 2")
    A = as_matrix(A)
    base = A.mod(N).rows
    result = None
    while k:
        if k & 1:
            result = base if result is None else _mul(result, base, N)
        k >>= 1
        if k:
            base = _mul(base, base, N)
    return IntegerMatrix(result)


def det_bareiss(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_cofactor(M: Sequence[Sequence[int]]) -> int:
    """Laplace expansion along the first row. Test oracle; exponential cost."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        if M[0][j]:
            sub = [row[:j] + row[j + 1:] for row in M[1:]]
            total += (-1) ** j * M[0][j] * det_cofactor(sub)
    return total


def _check_index(idx: Sequence[int], d: int):
    if any(not 0 <= i < d for i in idx) or any(a >= b for a, b in zip(idx, idx[1:])):
        raise IndexError(f"minor index {tuple(idx)} invalid for dimension {d}")


def minor_det(A, rows: Sequence[int], cols: Sequence[int]) -> int:
    """Determinant of the submatrix on ``rows`` x ``cols`` (0-based, increasing).

    The empty minor has determinant 1.
    """
    A = as_matrix(A)
    if len(rows) != len(cols):
        raise ValueError("row and column index sets differ in size")
    _check_index(rows, A.dim)
    _check_index(cols, A.dim)
    return det_bareiss([[A.rows[i][j] for j in cols] for i in rows])


def det(A) -> int:
    A = as_matrix(A)
    return det_bareiss(A.rows)


def index_sets(d: int, r: int) -> list:
    """S_r^d in lexicographic order (0-based)."""
    return list(itertools.combinations(range(d), r))


def exterior_power(A, r: int) -> IntegerMatrix:
    """Matrix of all r x r minors, rows/cols indexed lexicographically."""
    A = as_matrix(A)
    if not 1 <= r <= A.dim:
        raise ValueError(f"r={r} out of range [1, {A.dim}]")
    idx = index_sets(A.dim, r)
    return IntegerMatrix([[minor_det(A, J, K) for K in idx] for J in idx])


def iter_minors(A, r: int) -> Iterable[int]:
    A = as_matrix(A)
    idx = index_sets(A.dim, r)
    for J in idx:
        sub_rows = [A.rows[i] for i in J]
        for K in idx:
            yield det_bareiss([[row[j] for j in K] for row in sub_rows])


def determinant_ideal_gen(A, r: int) -> int:
    """Nonnegative generator of I_r(A): gcd of all r x r minors.

    ``I_0`` is the unit ideal, so r = 0 gives 1.  An all-zero level gives 0.
    """
    A = as_matrix(A)
    if not 0 <= r <= A.dim:
        raise ValueError(f"r={r} out of range [0, {A.dim}]")
    if r == 0:
        return 1
    g = 0
    for m in iter_minors(A, r):
        g = gcd(g, m)
        if g == 1:
            break
    return g


@dataclass(frozen=True)
class SmithNormalForm:
    diag: tuple

    def prefix_product(self, r: int) -> int:
        return reduce(lambda x, y: x * y, self.diag[:r], 1)


def smith_normal_form(A) -> SmithNormalForm:
    """Diagonal of the Smith normal form (nonnegative, divisibility chain).

    Transform matrices are not tracked.
    """
    A = as_matrix(A)
    a = A.tolist()
    n = len(a)
    diag = []
    for t in range(n):
        # pick the smallest nonzero entry of the trailing block as pivot
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    v = a[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                diag.extend([0] * (n - t))
                return SmithNormalForm(tuple(diag))
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            done = True
            for i in range(t + 1, n):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if not done:
                continue
            # row/col t is clear; enforce p | every entry of the trailing block
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                diag.append(abs(p))
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
    return SmithNormalForm(tuple(diag))


def n_rank(A, N: int) -> int:
    """Largest r with some r x r minor not divisible by N, via Smith form."""
    if N < 2:
        raise ValueError("N must be >= 2")
    snf = smith_normal_form(A)
    r = 0
    prod = 1
    for di in snf.diag:
        prod = prod * di % N
        if prod == 0:
            break
        r += 1
    return r


def n_rank_by_minors(A, N: int) -> int:
    """Same quantity as :func:`n_rank` by exhaustive minor enumeration."""
    A = as_matrix(A)
    best = 0
    for r in range(1, A.dim + 1):
        if any(m % N for m in iter_minors(A, r)):
            best = r
    return best


def all_minors_vanish_mod(A, r: int, N: int) -> bool:
    """True if every r x r minor of A is divisible by N."""
    A = as_matrix(A)
    if r > A.dim:
        return True
    return all(m % N == 0 for m in iter_minors(A, r))
