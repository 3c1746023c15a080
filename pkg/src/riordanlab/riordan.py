"""Riordan pairs, their truncated matrices, the group law and almost-Riordan factorizations."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IndexBeyondTruncation, NotDelta, NotUnit
from .fields import RAT, Field
from .matrix import DenseMatrix
from .series import (
    DEFAULT_DEG,
    TruncatedSeries,
    _align,
    comp_inverse,
    compose,
    div,
    equal,
    format_series,
    mul,
)


@dataclass(frozen=True, eq=False)
class RiordanPair:
    """The Riordan matrix ``(g, F)``; column ``j`` is generated by ``g * F**j``."""

    g: TruncatedSeries
    F: TruncatedSeries

    def __post_init__(self):
        g, F = _align(self.g, self.F)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "F", F)
        if not g.is_unit():
            raise NotUnit("g must have nonzero constant term")
        if not F.is_delta():
            raise NotDelta("F must have F(0) = 0 and F'(0) != 0")

    @classmethod
    def identity(cls, deg: int = DEFAULT_DEG, field: Field = RAT) -> RiordanPair:
        return cls(TruncatedSeries.constant(1, deg, field), TruncatedSeries.x(deg, field))

    @property
    def deg(self) -> int:
        return self.g.deg

    @property
    def field(self) -> Field:
        return self.g.field

    @property
    def g0(self):
        return self.g.coeffs[0]

    @property
    def f1(self):
        return self.F.coeffs[1]

    def ghat(self) -> TruncatedSeries:
        """``g / g0``."""
        return self.g.scale(1 / self.g0)

    def truncated(self, deg: int) -> RiordanPair:
        return RiordanPair(self.g.truncate(deg), self.F.truncate(deg))

    def entry(self, i: int, j: int):
        return entry(self, i, j)

    def matrix(self, n: int) -> DenseMatrix:
        return truncate(self, n)

    def __matmul__(self, other: RiordanPair) -> RiordanPair:
        return multiply(self, other)

    def inverse(self) -> RiordanPair:
        return inverse(self)

    def apply(self, h: TruncatedSeries) -> TruncatedSeries:
        return apply(self, h)

    def equals(self, other: RiordanPair, tol=None) -> bool:
        return equal(self.g, other.g, tol) and equal(self.F, other.F, tol)

    def __eq__(self, other):
        if not isinstance(other, RiordanPair):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        return f"RiordanPair(g={format_series(self.g, 6)}, F={format_series(self.F, 6)}, deg={self.deg})"


@dataclass(frozen=True, eq=False)
class AlmostRiordanTriple:
    """``(a, g, F)``: first column generated by ``a``, the block from (1,1) is ``(g, F)``."""

    a: TruncatedSeries
    g: TruncatedSeries
    F: TruncatedSeries

    def matrix(self, n: int) -> DenseMatrix:
        return almost_matrix(self, n)


def entry(A: RiordanPair, i: int, j: int):
    """``[x^i] g F^j``."""
    if i > A.deg or i < 0 or j < 0:
        raise IndexBeyondTruncation(f"index ({i}, {j}) outside truncation degree {A.deg}")
    if j > i:
        return A.field.zero
    # only coefficients up to x^i matter
    g, F = A.g.truncate(i), A.F.truncate(i)
    return mul(g, F**j).coeffs[i]


def columns(A: RiordanPair, n: int) -> list:
    """Generating series ``g F^j`` of the first ``n`` columns."""
    cols = []
    c = A.g
    for _ in range(n):
        cols.append(c)
        c = mul(c, A.F)
    return cols


def truncate(A: RiordanPair, n: int) -> DenseMatrix:
    """Leading ``n x n`` principal submatrix."""
    if n < 1:
        raise ValueError("dimension must be positive")
    if n > A.deg + 1:
        raise IndexBeyondTruncation(f"{n}x{n} needs truncation degree {n - 1}, have {A.deg}")
    cols = columns(A, n)
    zero = A.field.zero
    rows = tuple(tuple(cols[j].coeffs[i] if j <= i else zero for j in range(n)) for i in range(n))
    return DenseMatrix(rows, A.field)


def multiply(A: RiordanPair, B: RiordanPair) -> RiordanPair:
    """Group law ``(g, F)(h, L) = (g * h(F), L(F))``."""
    return RiordanPair(mul(A.g, compose(B.g, A.F)), compose(B.F, A.F))


def inverse(A: RiordanPair) -> RiordanPair:
    """``(1 / g(Fbar), Fbar)`` with ``Fbar`` the compositional inverse of ``F``."""
    Fbar = comp_inverse(A.F)
    one = TruncatedSeries.constant(1, A.deg, A.field)
    return RiordanPair(div(one, compose(A.g, Fbar)), Fbar)


def power(A: RiordanPair, n: int) -> RiordanPair:
    if n < 0:
        return power(inverse(A), -n)
    R = RiordanPair.identity(A.deg, A.field)
    for _ in range(n):
        R = multiply(R, A)
    return R


def apply(A: RiordanPair, h: TruncatedSeries) -> TruncatedSeries:
    """Action on a column vector by generating function: ``g * h(F)``."""
    return mul(A.g, compose(h, A.F))


def almost_matrix(T: AlmostRiordanTriple, n: int) -> DenseMatrix:
    if n < 1:
        raise ValueError("dimension must be positive")
    field = T.a.field
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][0] = T.a[i]
    if n > 1:
        block = truncate(RiordanPair(T.g, T.F), n - 1)
        for i in range(n - 1):
            for j in range(n - 1):
                rows[i + 1][j + 1] = block[i, j]
    return DenseMatrix(tuple(tuple(r) for r in rows), field)


def almost_decompose(A: RiordanPair) -> tuple[AlmostRiordanTriple, AlmostRiordanTriple]:
    """``(g, F) = (g, F/x, x) (1, g, F)``."""
    one = TruncatedSeries.constant(1, A.deg, A.field)
    x = TruncatedSeries.x(A.deg, A.field)
    left = AlmostRiordanTriple(A.g, A.F.shift_down(1), x)
    right = AlmostRiordanTriple(one, A.g, A.F)
    return left, right


def almost_factor_chain(A: RiordanPair, n: int) -> list[DenseMatrix]:
    """The ``n`` factors ``I_k (+) (g, F/x, x)_{n-k}``, ``k = 0 .. n-1``, in product order."""
    left, _ = almost_decompose(A)
    return [almost_matrix(left, n - k).direct_sum_identity(k) for k in range(n)]


def matrix_product(mats: list[DenseMatrix]) -> DenseMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def pascal(deg: int = DEFAULT_DEG, field: Field = RAT) -> RiordanPair:
    x = TruncatedSeries.x(deg, field)
    g = div(TruncatedSeries.constant(1, deg, field), 1 - x)
    return RiordanPair(g, mul(x, g))
