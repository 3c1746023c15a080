"""Riordan matrices fixing a given vector.

``(g, F) h = h`` is the same as ``h(F) = h / g``. Writing
``h = h0 + h_k H(x)^k`` with ``H = x (1 + (h_{k+1}/h_k) x + ...)^(1/k)``, every
solution for an admissible ``g`` is ``F = Hbar(D)`` with
``D = (h_k^-1 (h/g - h0))^(1/k)``, one for each admissible k-th root ``f1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadBranch,
    DegenerateD,
    NoSecondEntry,
    NotAdmissible,
    NotMonomial,
    NotUnit,
    OrderMismatch,
)
from .riordan import RiordanPair, apply
from .series import (
    TruncatedSeries,
    comp_inverse,
    compose,
    div,
    equal,
    nth_root_general,
    nth_root_unit,
    power_unit,
)


@dataclass(frozen=True)
class TargetVector:
    h: TruncatedSeries
    k: int | None
    h0: object

    @classmethod
    def from_series(cls, h: TruncatedSeries, tol=None) -> TargetVector:
        if h.order(tol) is None:
            raise ValueError("target vector must be nonzero")
        k = next((i for i in range(1, h.deg + 1) if not h.field.is_zero(h.coeffs[i], tol)), None)
        return cls(h, k, h.coeffs[0])

    @property
    def field(self):
        return self.h.field

    @property
    def hk(self):
        return self.h.coeffs[self.k]

    def is_monomial(self, tol=None) -> bool:
        if self.k is None or not self.field.is_zero(self.h0, tol):
            return False
        return all(self.field.is_zero(c, tol) for i, c in enumerate(self.h.coeffs) if i != self.k)


@dataclass(frozen=True)
class StabilizerSolution:
    pair: RiordanPair
    f1_branch: object
    D: TruncatedSeries | None = None


def _target(h, tol=None) -> TargetVector:
    return h if isinstance(h, TargetVector) else TargetVector.from_series(h, tol)


def stabilizes(pair: RiordanPair, h: TruncatedSeries, tol=None) -> bool:
    """``g * h(F) == h`` through the common truncation."""
    return equal(apply(pair, h), h, tol)


def extract_H(h, tol=None) -> TruncatedSeries:
    """``H`` with ``H(0) = 0``, ``H'(0) = 1`` and ``h = h0 + h_k H^k``."""
    t = _target(h, tol)
    if t.k is None:
        raise NoSecondEntry("h has no nonzero entry beyond h0")
    tail = (t.h - t.h0).shift_down(t.k, tol).scale(1 / t.hk)
    H = nth_root_unit(tail, t.k, tol).shift_up(1)
    return H.truncate(min(H.deg, t.h.deg))


def admissible_g_check(g: TruncatedSeries, h, tol=None) -> bool:
    """Shape condition on ``g`` for a stabilizer of ``h`` to exist."""
    t = _target(h, tol)
    field = g.field
    if not g.is_unit(tol):
        return False
    k = t.k if t.k is not None else g.deg + 1
    if not all(field.is_zero(g[i], tol) for i in range(1, min(k, g.deg + 1))):
        return False
    if not field.is_zero(t.h0, tol):
        return field.eq(g.coeffs[0], field.one, tol)
    return True


def root_target(g: TruncatedSeries, h, tol=None):
    """The constant whose k-th roots are the admissible linear coefficients ``f1``."""
    t = _target(h, tol)
    field = g.field
    if field.is_zero(t.h0, tol):
        return 1 / g.coeffs[0]
    gk = g[t.k]
    return (t.hk - t.h0 * gk) / t.hk


def stabilizer_F(g: TruncatedSeries, h, branch, tol=None) -> StabilizerSolution:
    """The stabilizer ``(g, Hbar(D))`` whose linear coefficient is ``branch``."""
    t = _target(h, tol)
    if t.k is None:
        raise NoSecondEntry("h has no nonzero entry beyond h0; stabilizers are (1, F) for any F")
    if not admissible_g_check(g, t, tol):
        raise NotAdmissible("g must be 1 + O(x^k) (h0 != 0) or g0 + O(x^k) (h0 == 0)")
    field = t.field
    k = t.k
    rho = root_target(g, t, tol)
    if field.is_zero(rho, tol):
        raise DegenerateD(f"the x^{k} coefficient of h/g - h0 vanishes, so f1 would be 0")
    branch = field.coerce(branch)
    if not field.eq(branch**k, rho, tol):
        raise BadBranch(f"{branch}^{k} != {rho}")
    c = div(t.h, g)
    try:
        D = nth_root_general((c - t.h0).scale(1 / t.hk), k, branch, tol)
    except OrderMismatch as exc:
        raise DegenerateD(str(exc)) from None
    Hbar = comp_inverse(extract_H(t, tol), tol)
    F = compose(Hbar, D, tol)
    pair = RiordanPair(g, F)
    if not stabilizes(pair, t.h, tol):
        raise DegenerateD("constructed pair does not fix h at truncation")
    return StabilizerSolution(pair, branch, D)


def enumerate_S_g(g: TruncatedSeries, h, tol=None) -> list[StabilizerSolution]:
    """One stabilizer per k-th root of the target constant available in the field."""
    t = _target(h, tol)
    if t.k is None or not admissible_g_check(g, t, tol):
        return []
    rho = root_target(g, t, tol)
    if t.field.is_zero(rho, tol):
        return []
    return [stabilizer_F(g, t, b, tol) for b in t.field.kth_roots(rho, t.k)]


def monomial_stabilizers(h, g: TruncatedSeries, tol=None) -> list[StabilizerSolution]:
    """For ``h = h_k x^k``: the pairs ``(g, f1 x g^(-1/k))`` with ``f1^k = 1/g0``."""
    t = _target(h, tol)
    if not t.is_monomial(tol):
        raise NotMonomial("h must have a single nonzero entry at some k >= 1")
    if not g.is_unit(tol):
        raise NotUnit("g must have nonzero constant term")
    field = g.field
    k = t.k
    g0 = g.coeffs[0]
    base = power_unit(g.scale(1 / g0), -Fraction(1, k), tol).shift_up(1).truncate(g.deg)
    out = []
    for b in field.kth_roots(1 / g0, k):
        F = base.scale(b)
        pair = RiordanPair(g, F)
        out.append(StabilizerSolution(pair, b, None))
    return out


__all__ = [
    "StabilizerSolution",
    "TargetVector",
    "admissible_g_check",
    "enumerate_S_g",
    "extract_H",
    "monomial_stabilizers",
    "root_target",
    "stabilizer_F",
    "stabilizes",
]
