"""Truncated formal power series over a pluggable coefficient field.

A :class:`TruncatedSeries` stores the coefficients of ``x**0 .. x**deg``. All
arithmetic is exact modulo ``x**(deg+1)``; binary operations work at the common
degree of their operands. A series flagged ``exact`` is a polynomial whose
coefficients above ``deg`` are known to vanish, so it can be padded to any
degree without losing information (``x``, constants, ``x + x**2`` ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadBranch,
    CompositionRequiresZeroConstant,
    ConstantTermNotOne,
    DivisionByNonUnit,
    FieldMismatch,
    IndexBeyondTruncation,
    NotAPowerSeries,
    NotDelta,
    OrderMismatch,
    ZeroElement,
)
from .fields import RAT, Field, same_field

DEFAULT_DEG = 16
DEFAULT_ORDER_BOUND = 64


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    coeffs: tuple
    field: Field = RAT
    exact: bool = False

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a truncated series needs at least one coefficient")

    # -- construction -------------------------------------------------------
    @classmethod
    def from_coeffs(cls, coeffs, deg: int | None = None, field: Field = RAT, exact: bool = False):
        vals = [field.coerce(c) for c in coeffs]
        if deg is None:
            deg = len(vals) - 1
        if len(vals) > deg + 1:
            tail = vals[deg + 1 :]
            if exact and any(not field.is_zero(c, 0.0) for c in tail):
                exact = False
            vals = vals[: deg + 1]
        vals += [field.zero] * (deg + 1 - len(vals))
        return cls(tuple(vals), field, exact)

    @classmethod
    def polynomial(cls, coeffs, deg: int = DEFAULT_DEG, field: Field = RAT):
        """A polynomial; exact when it fits inside ``deg``."""
        return cls.from_coeffs(coeffs, deg, field, exact=True)

    @classmethod
    def constant(cls, c, deg: int = DEFAULT_DEG, field: Field = RAT):
        return cls.polynomial([c], deg, field)

    @classmethod
    def x(cls, deg: int = DEFAULT_DEG, field: Field = RAT):
        return cls.polynomial([0, 1], deg, field)

    @classmethod
    def monomial(cls, k: int, c=1, deg: int = DEFAULT_DEG, field: Field = RAT):
        return cls.polynomial([0] * k + [c], max(deg, k), field)

    # -- basic queries ------------------------------------------------------
    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int):
        if i < 0:
            raise IndexError(i)
        if i > self.deg:
            if self.exact:
                return self.field.zero
            raise IndexBeyondTruncation(f"coefficient {i} beyond truncation degree {self.deg}")
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def order(self, tol: float | None = None) -> int | None:
        """Index of the lowest nonzero coefficient, None for the zero series."""
        for i, c in enumerate(self.coeffs):
            if not self.field.is_zero(c, tol):
                return i
        return None

    def degree(self, tol: float | None = None) -> int | None:
        """Index of the highest nonzero retained coefficient."""
        for i in range(self.deg, -1, -1):
            if not self.field.is_zero(self.coeffs[i], tol):
                return i
        return None

    def is_unit(self, tol=None) -> bool:
        return not self.field.is_zero(self.coeffs[0], tol)

    def is_delta(self, tol=None) -> bool:
        return (
            self.deg >= 1
            and self.field.is_zero(self.coeffs[0], tol)
            and not self.field.is_zero(self.coeffs[1], tol)
        )

    def series_class(self, tol=None) -> str:
        """One of ``"unit"``, ``"delta"`` or ``"general"``."""
        if self.is_unit(tol):
            return "unit"
        if self.is_delta(tol):
            return "delta"
        return "general"

    def is_constant(self, tol=None) -> bool:
        return all(self.field.is_zero(c, tol) for c in self.coeffs[1:])

    def truncate(self, deg: int) -> TruncatedSeries:
        """Drop to a lower degree, or pad an exact series to a higher one."""
        if deg <= self.deg:
            exact = self.exact and all(self.field.is_zero(c, 0.0) for c in self.coeffs[deg + 1 :])
            return TruncatedSeries(self.coeffs[: deg + 1], self.field, exact)
        if not self.exact:
            raise IndexBeyondTruncation(
                f"cannot extend an inexact series of degree {self.deg} to {deg}"
            )
        return TruncatedSeries(self.coeffs + (self.field.zero,) * (deg - self.deg), self.field, True)

    def scale(self, c) -> TruncatedSeries:
        c = self.field.coerce(c)
        return TruncatedSeries(tuple(c * a for a in self.coeffs), self.field, self.exact)

    def shift_down(self, m: int, tol=None) -> TruncatedSeries:
        """Divide by ``x**m``; the first ``m`` coefficients must vanish."""
        if m == 0:
            return self
        for i in range(min(m, self.deg + 1)):
            if not self.field.is_zero(self.coeffs[i], tol):
                raise NotAPowerSeries(f"division by x^{m} leaves a negative power (coefficient {i})")
        if self.exact:
            vals = self.coeffs[m:] + (self.field.zero,) * min(m, self.deg + 1)
            return TruncatedSeries(vals[: self.deg + 1], self.field, True)
        if m > self.deg:
            raise IndexBeyondTruncation(f"division by x^{m} exhausts a degree-{self.deg} series")
        return TruncatedSeries(self.coeffs[m:], self.field, False)

    def shift_up(self, m: int) -> TruncatedSeries:
        """Multiply by ``x**m`` (the known degree grows by ``m``)."""
        if m == 0:
            return self
        return TruncatedSeries((self.field.zero,) * m + self.coeffs, self.field, self.exact)

    def to_list(self) -> list:
        return list(self.coeffs)

    # -- operators ----------------------------------------------------------
    def _lift(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.deg, self.field)

    def __add__(self, other):
        a, b = _align(self, self._lift(other))
        return TruncatedSeries(tuple(p + q for p, q in zip(a.coeffs, b.coeffs)), a.field, a.exact and b.exact)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-c for c in self.coeffs), self.field, self.exact)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return div(self, other)
        return self.scale(1 / self.field.coerce(other))

    def __rtruediv__(self, other):
        return div(self._lift(other), self)

    def __pow__(self, k: int):
        return power(self, k)

    def __call__(self, inner: TruncatedSeries) -> TruncatedSeries:
        return compose(self, inner)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return equal(self, other)

    __hash__ = None

    def __repr__(self):
        return f"TruncatedSeries({format_series(self)}, deg={self.deg}, field={self.field.name})"


@dataclass(frozen=True)
class OrderCertificate:
    """Outcome of a multiplicative- or compositional-order search.

    ``kind`` is one of ``finite_mult``, ``infinite_mult``, ``finite_comp_at_trunc``,
    ``hybrid`` or ``undetermined``.
    """

    kind: str
    n: int | None
    trunc_degree: int | None
    search_bound: int
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "trunc_degree": self.trunc_degree,
            "search_bound": self.search_bound,
            "reason": self.reason,
        }


def format_series(a: TruncatedSeries, limit: int | None = None) -> str:
    body = ""
    for i, c in enumerate(a.coeffs[: None if limit is None else limit + 1]):
        if a.field.is_zero(c, 0.0):
            continue
        v = a.field.display(c)
        sign = "+"
        if v.startswith("-"):
            sign, v = "-", v[1:]
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        term = v if not mono else (mono if v == "1" else f"{v}*{mono}")
        if not body:
            body = term if sign == "+" else "-" + term
        else:
            body += f" {sign} {term}"
    body = body or "0"
    return body if a.exact else f"{body} + O(x^{a.deg + 1})"


def _align(a: TruncatedSeries, b: TruncatedSeries):
    """Bring two series to their common degree."""
    if not same_field(a.field, b.field):
        raise FieldMismatch(f"{a.field.name} vs {b.field.name}")
    if a.exact and b.exact:
        d = max(a.deg, b.deg)
    elif a.exact:
        d = b.deg
    elif b.exact:
        d = a.deg
    else:
        d = min(a.deg, b.deg)
    return a.truncate(d), b.truncate(d)


def equal(a: TruncatedSeries, b: TruncatedSeries, tol: float | None = None) -> bool:
    """Coefficientwise equality through the common degree."""
    a, b = _align(a, b)
    return all(a.field.eq(p, q, tol) for p, q in zip(a.coeffs, b.coeffs))


def _poly_fits(a: TruncatedSeries, b: TruncatedSeries, deg: int, combine) -> bool:
    if not (a.exact and b.exact):
        return False
    da, db = a.degree(0.0), b.degree(0.0)
    if da is None or db is None:
        return True
    return combine(da, db) <= deg


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product modulo ``x**(deg+1)``."""
    a, b = _align(a, b)
    n = a.deg
    zero = a.field.zero
    out = [zero] * (n + 1)
    bc = b.coeffs
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j in range(n + 1 - i):
            bj = bc[j]
            if bj != 0:
                out[i + j] += ai * bj
    return TruncatedSeries(tuple(out), a.field, _poly_fits(a, b, n, lambda p, q: p + q))


def div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Quotient ``a / b`` for a unit ``b``."""
    a, b = _align(a, b)
    if a.field.is_zero(b.coeffs[0]):
        raise DivisionByNonUnit("divisor has zero constant term")
    n = a.deg
    inv0 = 1 / b.coeffs[0]
    q = []
    bc = b.coeffs
    for m in range(n + 1):
        s = a.coeffs[m]
        for i in range(1, m + 1):
            if bc[i] != 0:
                s -= bc[i] * q[m - i]
        q.append(s * inv0)
    exact = a.exact and b.exact and b.is_constant(0.0)
    return TruncatedSeries(tuple(q), a.field, exact)


def div_general(a: TruncatedSeries, b: TruncatedSeries, tol=None) -> TruncatedSeries:
    """Quotient allowing a divisor of positive order (cancels a common power of x)."""
    m = b.order(tol)
    if m is None:
        raise DivisionByNonUnit("division by the zero series")
    if m == 0:
        return div(a, b)
    return div(a.shift_down(m, tol), b.shift_down(m, tol))


def power(a: TruncatedSeries, k: int) -> TruncatedSeries:
    if k < 0:
        return div(TruncatedSeries.constant(1, a.deg, a.field), power(a, -k))
    result = TruncatedSeries.constant(1, a.deg, a.field)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def compose(h: TruncatedSeries, F: TruncatedSeries, tol=None) -> TruncatedSeries:
    """``h(F(x))`` by Horner's rule; ``F`` must have zero constant term."""
    h, F = _align(h, F)
    if not F.field.is_zero(F.coeffs[0], tol):
        raise CompositionRequiresZeroConstant("inner series has nonzero constant term")
    n = h.deg
    F = TruncatedSeries((F.field.zero,) + F.coeffs[1:], F.field, F.exact)
    top = h.degree(0.0) if h.exact else n
    if top is None:
        return TruncatedSeries.constant(0, n, h.field)
    acc = TruncatedSeries((h.coeffs[top],) + (h.field.zero,) * n, h.field)
    for i in range(top - 1, -1, -1):
        step = list(mul(acc, F).coeffs)
        step[0] += h.coeffs[i]
        acc = TruncatedSeries(tuple(step), h.field)
    exact = _poly_fits(h, F, n, lambda p, q: p * q)
    return TruncatedSeries(acc.coeffs, h.field, exact)


def x_like(F: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries.x(F.deg, F.field)


def _require_delta(F: TruncatedSeries, tol=None):
    if F.deg < 1 or not F.field.is_zero(F.coeffs[0], tol) or F.field.is_zero(F.coeffs[1], tol):
        raise NotDelta("series must have zero constant term and nonzero linear term")


def comp_inverse(F: TruncatedSeries, tol=None) -> TruncatedSeries:
    """Compositional inverse of a delta series by coefficient recursion.

    With ``G_1 = 1/f_1`` fixed, the coefficient of ``x**m`` in ``F(G)`` is
    ``f_1 * G_m`` plus terms in ``G_1 .. G_{m-1}`` only, so each ``G_m`` is
    solved from the lower ones. ``P[j][m] = [x^m] G^j`` is filled column by
    column; it never needs ``G_m`` for ``j >= 2``.
    """
    _require_delta(F, tol)
    field = F.field
    n = F.deg
    fc = F.coeffs
    f1 = fc[1]
    zero = field.zero
    P = [[zero] * (n + 1) for _ in range(n + 1)]
    P[0][0] = field.one
    P[1][1] = 1 / f1
    for j in range(2, n + 1):
        P[j][j] = P[j - 1][j - 1] * P[1][1]
    for m in range(2, n + 1):
        c = zero
        for j in range(2, m + 1):
            if j < m:
                # G_i with 1 <= i <= m - j + 1 < m are all known
                t = zero
                for i in range(1, m - j + 2):
                    if P[1][i] != 0 and P[j - 1][m - i] != 0:
                        t += P[1][i] * P[j - 1][m - i]
                P[j][m] = t
            if fc[j] != 0:
                c += fc[j] * P[j][m]
        P[1][m] = -c / f1
    exact = F.exact and F.degree(0.0) == 1
    return TruncatedSeries(tuple(P[1]), field, exact)


def _power_one(a: TruncatedSeries, alpha: Fraction) -> TruncatedSeries:
    """``a**alpha`` for ``a(0) == 1`` via the recurrence from ``B' A = alpha A' B``."""
    field = a.field
    alpha = field.coerce(alpha)
    ac = a.coeffs
    b = [field.one]
    for m in range(1, a.deg + 1):
        s = field.zero
        for k in range(1, m + 1):
            if ac[k] != 0:
                s += ((alpha + 1) * k - m) * ac[k] * b[m - k]
        b.append(s / m)
    exact = a.exact and a.is_constant(0.0)
    return TruncatedSeries(tuple(b), field, exact)


def power_unit(a: TruncatedSeries, alpha, tol=None) -> TruncatedSeries:
    """Rational power of a series with constant term 1 (unique such branch)."""
    if not a.field.eq(a.coeffs[0], a.field.one, tol):
        raise ConstantTermNotOne(f"constant term is {a.coeffs[0]}, expected 1")
    a = TruncatedSeries((a.field.one,) + a.coeffs[1:], a.field, a.exact)
    return _power_one(a, Fraction(alpha))


def nth_root_unit(a: TruncatedSeries, n: int, tol=None) -> TruncatedSeries:
    """The unique ``B`` with ``B(0) = 1`` and ``B**n = a``."""
    if n < 1:
        raise ValueError("root index must be positive")
    return power_unit(a, Fraction(1, n), tol)


def nth_root_general(c: TruncatedSeries, k: int, b1, tol=None) -> TruncatedSeries:
    """The delta series ``B`` with ``B**k = c`` whose linear coefficient is ``b1``.

    ``c`` must have order exactly ``k``; the result is ``b1 * x * chat**(1/k)``
    where ``chat = c / (c_k x**k)``.
    """
    field = c.field
    if k < 1:
        raise ValueError("root index must be positive")
    ordc = c.order(tol)
    if ordc != k:
        raise OrderMismatch(f"lowest nonzero power is {ordc}, expected {k}")
    b1 = field.coerce(b1)
    ck = c.coeffs[k]
    if not field.eq(b1**k, ck, None if tol is None else tol * max(1.0, abs(ck))):
        raise BadBranch(f"branch {b1} does not satisfy b1^{k} = {ck}")
    chat = c.shift_down(k, tol).scale(1 / ck)
    root = nth_root_unit(chat, k, tol)
    return root.shift_up(1).scale(b1)


def mult_order(a, field: Field = RAT, bound: int = DEFAULT_ORDER_BOUND, tol=None) -> OrderCertificate:
    """Multiplicative order of a field element, searched up to ``bound``."""
    a = field.coerce(a)
    if field.is_zero(a, tol):
        raise ZeroElement("zero has no multiplicative order")
    p = field.one
    for n in range(1, bound + 1):
        p = p * a
        if field.eq(p, field.one, tol):
            return OrderCertificate("finite_mult", n, None, bound)
    t = getattr(field, "tol", 0.0) if tol is None else tol
    if abs(abs(a) - 1) > t:
        return OrderCertificate("infinite_mult", None, None, bound, "|a| != 1")
    if field.name == "rat":
        # the only rational roots of unity are +1 and -1
        return OrderCertificate("undetermined", None, None, bound, "bound too small for +-1")
    return OrderCertificate("undetermined", None, None, bound, "|a| = 1 but no root of unity up to bound")


def iterate(F: TruncatedSeries, n: int) -> TruncatedSeries:
    """The ``n``-fold self-composition ``F^(n)`` (``x`` for ``n == 0``)."""
    G = x_like(F)
    for _ in range(n):
        G = compose(F, G)
    return G


def comp_order(F: TruncatedSeries, bound: int = DEFAULT_ORDER_BOUND, tol=None) -> OrderCertificate:
    """Certify the compositional behaviour of a delta series at its truncation."""
    _require_delta(F, tol)
    field = F.field
    N = F.deg
    m = mult_order(F.coeffs[1], field, bound, tol)
    if m.kind == "infinite_mult":
        return OrderCertificate(
            "infinite_mult", None, N, bound, "linear coefficient of infinite order; conjugate to f1*x"
        )
    if m.kind == "undetermined":
        return OrderCertificate("undetermined", None, N, bound, m.reason)
    n = m.n
    s = next((i for i in range(2, N + 1) if not field.is_zero(F.coeffs[i], tol)), None)
    if s is None:
        if F.exact:
            return OrderCertificate("finite_comp_at_trunc", n, N, bound, "F = f1*x exactly")
        return OrderCertificate("finite_comp_at_trunc", n, N, bound, "F = f1*x through truncation")
    if F.exact:
        return OrderCertificate("hybrid", n, N, bound, f"polynomial with a term of degree {s}")
    if (s - 1) % n == 0:
        return OrderCertificate("hybrid", n, N, bound, f"lowest nonlinear degree {s} = 1 mod {n}")
    Fn = iterate(F, n)
    diff = next((i for i in range(N + 1) if not field.eq(Fn.coeffs[i], field.one if i == 1 else field.zero, tol)), None)
    if diff is None:
        return OrderCertificate("finite_comp_at_trunc", n, N, bound, f"F^({n}) = x through degree {N}")
    return OrderCertificate("hybrid", n, N, bound, f"F^({n}) differs from x at degree {diff}")
