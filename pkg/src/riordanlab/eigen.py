"""Eigenvectors of Riordan matrices.

An eigenvector of level ``k`` has generating function ``h = x^k + ...``; its
eigenvalue is forced to be ``g0 * f1**k``.  This module solves for such vectors,
linearizes ``F`` (finds ``theta`` with ``theta(F) = f1 * theta``), diagonalizes
pairs by a Riordan conjugator and sorts every pair into one of the classes
Full / Level(k) / NoEigenvectors, with UndeterminedAtTrunc when a finite
truncation cannot settle the question.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (
    HybridNotAllowed,
    HybridNotLinearizable,
    Inconsistent,
    NotDiagonalizable,
    NotHybrid,
    PreconditionViolated,
    UndeterminedAtTrunc,
)
from .riordan import RiordanPair, columns, multiply, power
from .series import (
    DEFAULT_ORDER_BOUND,
    OrderCertificate,
    TruncatedSeries,
    comp_order,
    compose,
    div,
    equal,
    iterate,
    mul,
    mult_order,
)

FULL = "Full"
LEVEL = "Level"
NONE = "NoEigenvectors"
UNDETERMINED = "UndeterminedAtTrunc"


@dataclass(frozen=True)
class LevelEigenvector:
    level: int
    h: TruncatedSeries
    eigenvalue: object
    checks: int = 0  # redundant rows of the truncated system that were verified
    free: tuple = ()  # indices of coefficients fixed to 0 by choice

    def normalized(self) -> LevelEigenvector:
        lead = self.h.coeffs[self.level]
        return LevelEigenvector(self.level, self.h.scale(1 / lead), self.eigenvalue, self.checks, self.free)


@dataclass(frozen=True)
class Linearizer:
    theta: TruncatedSeries
    f1: object
    method: str = ""


@dataclass
class EigenReport:
    verdict: str
    trunc_degree: int
    level: int | None = None
    witnesses: list = dc_field(default_factory=list)
    linearizer: Linearizer | None = None
    diagonalizer: tuple | None = None
    evidence: list = dc_field(default_factory=list)

    @property
    def label(self) -> str:
        return f"Level({self.level})" if self.verdict == LEVEL else self.verdict


@dataclass(frozen=True)
class RecognitionVerdict:
    """Outcome of the lowest-term recognition test.

    ``kind`` is ``none``, ``forced_level``, ``primary_only`` or ``not_applicable``.
    """

    kind: str
    level: int | None = None
    case: str = ""
    r: int | None = None
    s: int | None = None
    n: int | None = None
    reason: str = ""


def eigenvalue_of_level(A: RiordanPair, k: int):
    return A.g0 * A.f1**k


def _scale_tol(field, tol, entries) -> float | None:
    if field.name == "rat":
        return None
    base = field.tol if tol is None else tol
    big = max((abs(v) for v in entries), default=1.0)
    return base * max(1.0, big)


def _solve_system(field, rows, tol):
    """Solve a sequence of linear rows ``(coeffs, rhs)`` incrementally.

    Rows are absorbed in order; the first row that makes the system
    inconsistent is reported by its position. Non-pivot unknowns are set to 0.
    Returns ``(solution, checks, free_columns)``.
    """
    m = len(rows[0][0]) if rows else 0
    basis: dict[int, tuple[list, object]] = {}
    checks = 0
    for pos, (coeffs, rhs) in enumerate(rows):
        v = list(coeffs)
        b = rhs
        for p in sorted(basis):
            c = v[p]
            if not field.is_zero(c, tol):
                prow, prhs = basis[p]
                for j in range(p, m):
                    if prow[j] != 0:
                        v[j] -= c * prow[j]
                b -= c * prhs
                v[p] = field.zero
        lead = next((j for j in range(m) if not field.is_zero(v[j], tol)), None)
        if lead is None:
            if not field.is_zero(b, tol):
                raise Inconsistent(pos)
            checks += 1
            continue
        inv = 1 / v[lead]
        basis[lead] = ([field.zero] * lead + [c * inv for c in v[lead:]], b * inv)
    y = [field.zero] * m
    for p in sorted(basis, reverse=True):
        prow, prhs = basis[p]
        s = prhs
        for j in range(p + 1, m):
            if prow[j] != 0:
                s -= prow[j] * y[j]
        y[p] = s
    free = tuple(j for j in range(m) if j not in basis)
    return y, checks, free


def solve_level_k(A: RiordanPair, k: int, deg: int | None = None, tol=None) -> LevelEigenvector:
    """Eigenvector of level ``k`` with ``h_k = 1`` at truncation ``deg``.

    Solves ``(A - lambda_k I) h = 0`` for ``h_{k+1} .. h_N`` row by row. Where a
    pivot ``g0 f1^n - g0 f1^k`` vanishes the row becomes a constraint on earlier
    coefficients, so the unknowns are eliminated jointly rather than greedily.
    Raises :class:`Inconsistent` with the first failing row.
    """
    if deg is not None:
        A = A.truncated(deg)
    N = A.deg
    if k < 0 or k > N:
        raise PreconditionViolated(f"level {k} outside 0..{N}")
    field = A.field
    lam = eigenvalue_of_level(A, k)
    cols = columns(A, N + 1)
    entries = [cols[j].coeffs[n] for n in range(N + 1) for j in range(n + 1)]
    etol = _scale_tol(field, tol, entries)
    m = N - k
    rows = []
    for n in range(k + 1, N + 1):
        coeffs = [field.zero] * m
        for j in range(k + 1, n + 1):
            a = cols[j].coeffs[n]
            if j == n:
                a = a - lam
            coeffs[j - k - 1] = a
        rows.append((coeffs, -cols[k].coeffs[n]))
    try:
        y, checks, free = _solve_system(field, rows, etol)
    except Inconsistent as exc:
        raise Inconsistent(exc.row + k + 1, k) from None
    h = [field.zero] * k + [field.one] + y
    return LevelEigenvector(
        k, TruncatedSeries(tuple(h), field), lam, checks, tuple(j + k + 1 for j in free)
    )


def primary_eigenvector(A: RiordanPair, deg: int | None = None, tol=None) -> LevelEigenvector:
    """Solution of ``g * h(F) = g0 * h`` with ``h(0) = 1``."""
    return solve_level_k(A, 0, deg, tol)


def is_eigenvector(A: RiordanPair, v: LevelEigenvector, tol=None) -> bool:
    lhs = mul(A.g, compose(v.h, A.F))
    return equal(lhs, v.h.scale(v.eigenvalue), tol)


def linearize(F: TruncatedSeries, deg: int | None = None, tol=None, bound: int = DEFAULT_ORDER_BOUND) -> Linearizer:
    """A delta series ``theta`` with ``theta(F) = f1 * theta`` through the truncation."""
    if deg is not None:
        F = F.truncate(deg)
    cert = comp_order(F, bound, tol)
    field = F.field
    N = F.deg
    f1 = F.coeffs[1]
    if cert.kind == "hybrid":
        raise HybridNotLinearizable(f"F is hybrid ({cert.reason}); not conjugate to f1*x")
    if cert.kind == "undetermined":
        raise UndeterminedAtTrunc(f"order of F undetermined: {cert.reason}")
    if cert.kind == "infinite_mult":
        theta = [field.zero, field.one] + [field.zero] * (N - 1)
        for n in range(2, N + 1):
            part = compose(TruncatedSeries(tuple(theta[:n]) + (field.zero,) * (N - n + 1), field), F)
            theta[n] = part.coeffs[n] / (f1 - f1**n)
        out = Linearizer(TruncatedSeries(tuple(theta), field), f1, "recursion")
    else:
        n = cert.n
        acc = TruncatedSeries.constant(0, N, field)
        G = TruncatedSeries.x(N, field)
        for j in range(n):
            acc = acc + G.scale(f1 ** (-j))
            G = compose(F, G)
        theta = acc.scale(Fraction(1, n) if field.name == "rat" else 1 / n)
        theta = TruncatedSeries(theta.coeffs, field)
        out = Linearizer(theta, f1, "averaging")
        if field.is_zero(theta.coeffs[1], tol) or not _linearizes(out, F, tol):
            ident = RiordanPair(TruncatedSeries.constant(1, N, field), F)
            try:
                v = solve_level_k(ident, 1, tol=tol)
            except Inconsistent as exc:
                raise UndeterminedAtTrunc(f"no linearizer at truncation (row {exc.row})") from None
            out = Linearizer(v.h, f1, "row-solve")
    if not _linearizes(out, F, tol):
        raise UndeterminedAtTrunc("linearizer failed verification at truncation")
    return out


def _linearizes(L: Linearizer, F: TruncatedSeries, tol=None) -> bool:
    return equal(compose(L.theta, F), L.theta.scale(L.f1), tol)


def primary_from_level_k(v: LevelEigenvector, L: Linearizer) -> LevelEigenvector:
    """Turn a level-``k`` eigenvector into a primary one: ``h = v * theta**(-k)``."""
    k = v.level
    if k == 0:
        return v
    u = v.h.shift_down(k)
    t = L.theta.shift_down(1)
    h = div(u, t**k)
    return LevelEigenvector(0, h, v.eigenvalue / L.f1**k)


def diagonalize(A: RiordanPair, deg: int | None = None, tol=None) -> tuple[TruncatedSeries, TruncatedSeries]:
    """``(h, theta)`` with ``(h, theta)^-1 (g, F) (h, theta) = (g0, f1 x)`` at truncation."""
    if deg is not None:
        A = A.truncated(deg)
    h, L = _diagonalize(A, tol)
    return h, L.theta


def _diagonalize(A: RiordanPair, tol=None) -> tuple[TruncatedSeries, Linearizer]:
    try:
        L = linearize(A.F, tol=tol)
    except HybridNotLinearizable as exc:
        raise NotDiagonalizable(f"F is not conjugate to f1*x: {exc}") from None
    except UndeterminedAtTrunc as exc:
        raise NotDiagonalizable(f"linearizer undetermined at truncation: {exc}") from None
    try:
        v = primary_eigenvector(A, tol=tol)
    except Inconsistent as exc:
        raise NotDiagonalizable(f"no primary eigenvector (row {exc.row} inconsistent)") from None
    h, theta = v.h, L.theta
    # X^-1 A X = (g0, f1 x) checked as A X = X (g0, f1 x) = (g0 h, f1 theta)
    X = RiordanPair(h, theta)
    if not multiply(A, X).equals(RiordanPair(h.scale(A.g0), theta.scale(A.f1)), tol):
        raise NotDiagonalizable("conjugation check failed at truncation")
    return h, L


def _lowest_nonzero(s: TruncatedSeries, start: int, tol=None) -> int | None:
    return next((i for i in range(start, s.deg + 1) if not s.field.is_zero(s.coeffs[i], tol)), None)


def recognition(A: RiordanPair, tol=None, bound: int = DEFAULT_ORDER_BOUND) -> RecognitionVerdict:
    """Decide the eigenvector level from the lowest nonconstant terms of ``g`` and ``F``.

    Applies when ``g = g0 + g_r x^r + ...`` (r >= 1), ``F = f1 x + f_s x^s + ...``
    (s >= 2) and ``f1`` has finite multiplicative order.
    """
    field = A.field
    r = _lowest_nonzero(A.g, 1, tol)
    s = _lowest_nonzero(A.F, 2, tol)
    if r is None:
        return RecognitionVerdict("not_applicable", reason="g is constant at truncation")
    if s is None:
        return RecognitionVerdict("not_applicable", r=r, reason="F = f1*x at truncation")
    cert = mult_order(A.f1, field, bound, tol)
    if cert.kind != "finite_mult":
        return RecognitionVerdict("not_applicable", r=r, s=s, reason="f1 not of finite multiplicative order")
    n = cert.n
    g0, gr, f1, fs = A.g0, A.g.coeffs[r], A.f1, A.F.coeffs[s]
    one = field.one
    if r < s - 1 and field.eq(f1**r, one, tol):
        return RecognitionVerdict("none", case="a", r=r, s=s, n=n, reason="r < s-1 and f1^r = 1")
    if r == s - 1 and field.eq(f1**r, one, tol):
        all_real = all(field.is_real_positive(v, tol) is not None for v in (g0, gr, f1, fs))
        if all_real and field.is_real_positive(g0 * gr * f1 * fs, tol):
            return RecognitionVerdict("none", case="b(ii)", r=r, s=s, n=n, reason="g0*g_r*f1*f_s > 0")
        k = -gr * f1 / (g0 * fs)
        kint = _as_nonneg_int(k, field, tol)
        if kint is None:
            return RecognitionVerdict("none", case="b(i)", r=r, s=s, n=n, reason=f"forced level {k} is not a non-negative integer")
        return RecognitionVerdict("forced_level", level=kint, case="b(i)", r=r, s=s, n=n, reason="k = -g_r f1 / (g0 f_s)")
    if r >= s and field.eq(f1 ** (s - 1), one, tol):
        return RecognitionVerdict("primary_only", level=0, case="c", r=r, s=s, n=n, reason="r >= s and f1^(s-1) = 1")
    return RecognitionVerdict("not_applicable", r=r, s=s, n=n, reason="no case of the recognition test applies")


def _as_nonneg_int(k, field, tol) -> int | None:
    if field.name == "rat":
        return int(k) if k.denominator == 1 and k >= 0 else None
    t = field.tol if tol is None else tol
    if abs(k.imag) > t:
        return None
    kr = round(k.real)
    if abs(k.real - kr) > t or kr < 0:
        return None
    return int(kr)


def _full_witnesses(A: RiordanPair, h: TruncatedSeries, theta: TruncatedSeries) -> list:
    """Normalized columns ``h * theta^k`` of the diagonalizer."""
    out = []
    col = h
    t1 = theta.coeffs[1]
    for k in range(A.deg + 1):
        lead = h.coeffs[0] * t1**k
        out.append(LevelEigenvector(k, col.scale(1 / lead), eigenvalue_of_level(A, k)))
        col = mul(col, theta)
    return out


def _full_report(A: RiordanPair, evidence: list, tol) -> EigenReport:
    N = A.deg
    try:
        h, L = _diagonalize(A, tol)
    except NotDiagonalizable as exc:
        evidence.append({"tag": "diagonalization-failed-at-truncation", "reason": exc.reason})
        return EigenReport(UNDETERMINED, N, evidence=evidence)
    theta = L.theta
    return EigenReport(
        FULL, N, witnesses=_full_witnesses(A, h, theta), linearizer=L, diagonalizer=(h, theta), evidence=evidence
    )


def _try_level(A, k, tol):
    try:
        return solve_level_k(A, k, tol=tol)
    except Inconsistent:
        return None


def classify(A: RiordanPair, deg: int | None = None, tol=None, bound: int = DEFAULT_ORDER_BOUND) -> EigenReport:
    """Sort ``(g, F)`` into Full, Level(k), NoEigenvectors or UndeterminedAtTrunc."""
    if deg is not None:
        A = A.truncated(deg)
    N = A.deg
    field = A.field
    evidence: list = []
    mcert = mult_order(A.f1, field, bound, tol)
    if mcert.kind == "infinite_mult":
        evidence.append({"tag": "f1-infinite-multiplicative-order"})
        return _full_report(A, evidence, tol)
    if mcert.kind == "undetermined":
        evidence.append({"tag": "f1-order-undetermined", "reason": mcert.reason, "bound": bound})
        return EigenReport(UNDETERMINED, N, evidence=evidence)
    n = mcert.n
    ccert = comp_order(A.F, bound, tol)
    evidence.append({"tag": "F-order", **ccert.as_dict()})
    if ccert.kind == "finite_comp_at_trunc":
        return _classify_finite_order(A, n, evidence, tol)
    if ccert.kind != "hybrid":
        evidence.append({"tag": "F-order-undetermined"})
        return EigenReport(UNDETERMINED, N, evidence=evidence)

    # F hybrid: at most one level can occur
    if A.g.is_constant(tol):
        v = _try_level(A, 0, tol)
        evidence.append({"tag": "hybrid-F-constant-g", "level": 0})
        if v is None:  # cannot happen: h = 1 solves g0 h(F) = g0 h
            return EigenReport(UNDETERMINED, N, evidence=evidence)
        return EigenReport(LEVEL, N, level=0, witnesses=[v.normalized()], evidence=evidence)
    rec = recognition(A, tol, bound)
    evidence.append(
        {"tag": "recognition", "kind": rec.kind, "case": rec.case, "r": rec.r, "s": rec.s, "n": rec.n, "level": rec.level}
    )
    if rec.kind == "none":
        return EigenReport(NONE, N, evidence=evidence)
    if rec.kind in ("forced_level", "primary_only"):
        k = rec.level
        if k > N:
            evidence.append({"tag": "forced-level-beyond-truncation", "level": k})
            return EigenReport(UNDETERMINED, N, evidence=evidence)
        v = _try_level(A, k, tol)
        if v is None:
            evidence.append({"tag": "forced-level-inconsistent", "level": k})
            return EigenReport(NONE, N, evidence=evidence)
        return EigenReport(LEVEL, N, level=k, witnesses=[v.normalized()], evidence=evidence)
    return _scan_levels(A, n, rec, evidence, tol)


def _classify_finite_order(A: RiordanPair, n: int, evidence: list, tol) -> EigenReport:
    N = A.deg
    field = A.field
    one = field.one
    ghat = A.ghat()
    if A.g.is_constant(tol):
        evidence.append({"tag": "constant-g-finite-order-F"})
        return _full_report(A, evidence, tol)
    if _lowest_nonzero(A.F, 2, tol) is None:
        # F = f1 x: Full iff ghat(x) ghat(f1 x) ... ghat(f1^(n-1) x) = 1
        prod = TruncatedSeries.constant(1, N, field)
        for j in range(n):
            prod = mul(prod, compose(ghat, TruncatedSeries.x(N, field).scale(A.f1**j)))
        ok = equal(prod, TruncatedSeries.constant(1, N, field), tol)
        evidence.append({"tag": "scalar-F-product-test", "n": n, "passed": ok})
        return _full_report(A, evidence, tol) if ok else EigenReport(NONE, N, evidence=evidence)
    r = _lowest_nonzero(ghat, 1, tol)
    if field.eq(A.f1**r, one, tol):
        evidence.append({"tag": "resonant-lowest-g-term", "r": r, "n": n})
        return EigenReport(NONE, N, evidence=evidence)
    P = power(RiordanPair(ghat, A.F), n)
    ok = P.equals(RiordanPair.identity(N, field), tol)
    evidence.append({"tag": "group-order-test", "n": n, "passed": ok})
    if ok:
        return _full_report(A, evidence, tol)
    # F is not hybrid, so a single eigenvector plus a linearizer would already give Full
    return EigenReport(NONE, N, evidence=evidence)


def _scan_levels(A: RiordanPair, n: int, rec: RecognitionVerdict, evidence: list, tol) -> EigenReport:
    N = A.deg
    window = max(rec.r or 0, (rec.s or 2) - 1) + n
    if A.g.exact and A.F.exact:
        # polynomial inputs: extend the truncation so every level 0..N has enough rows
        M = N + 2 * window
        B = A.truncated(M)
        found = {k: v for k in range(N + 1) if (v := _try_level(B, k, tol)) is not None}
        evidence.append({"tag": "level-scan-extended", "truncation": M, "levels": f"0..{N}", "consistent": sorted(found)})
        if not found:
            return EigenReport(NONE, N, evidence=evidence)
        if len(found) == 1:
            (k, v), = found.items()
            w = LevelEigenvector(k, v.h.truncate(N), v.eigenvalue, v.checks, v.free).normalized()
            return EigenReport(LEVEL, N, level=k, witnesses=[w], evidence=evidence)
        return EigenReport(UNDETERMINED, N, evidence=evidence)
    found = {}
    for k in range(N + 1):
        v = _try_level(A, k, tol)
        if v is not None:
            found[k] = v
    low = sorted(k for k in found if k <= N - window)
    high = sorted(k for k in found if k > N - window)
    evidence.append({"tag": "level-scan", "window": window, "consistent_low": low, "consistent_high": high})
    if not found:
        return EigenReport(NONE, N, evidence=evidence)
    if len(low) == 1:
        k = low[0]
        return EigenReport(LEVEL, N, level=k, witnesses=[found[k].normalized()], evidence=evidence)
    return EigenReport(UNDETERMINED, N, evidence=evidence)


def _level_input(h: TruncatedSeries, k: int | None, tol) -> int:
    lvl = h.order(tol)
    if lvl is None:
        raise PreconditionViolated("h must be nonzero")
    if k is not None and k != lvl:
        raise PreconditionViolated(f"h has level {lvl}, not {k}")
    return lvl


def _g_from_eigenvector(g0, F: TruncatedSeries, h: TruncatedSeries, k: int) -> TruncatedSeries:
    """``g0 f1^k h / h(F)``, cancelling ``x^k`` before dividing."""
    field = F.field
    u = h.shift_down(k)
    phi = F.shift_down(1).scale(1 / F.coeffs[1])
    denom = mul(phi**k, compose(u, F))
    return div(u, denom).scale(field.coerce(g0))


def construct_full(g0, F: TruncatedSeries, h: TruncatedSeries, k: int | None = None, tol=None) -> RiordanPair:
    """A pair with a full set of eigenvectors having ``h`` as its level-``k`` eigenvector."""
    k = _level_input(h, k, tol)
    try:
        linearize(F, tol=tol)
    except (HybridNotLinearizable, UndeterminedAtTrunc) as exc:
        raise HybridNotAllowed(f"F must be conjugate to f1*x: {exc}") from None
    return RiordanPair(_g_from_eigenvector(g0, F, h, k), F)


def construct_level_k(g0, F: TruncatedSeries, h: TruncatedSeries, k: int | None = None, tol=None) -> RiordanPair:
    """A pair whose only eigenvectors are multiples of ``h`` (``F`` must be hybrid)."""
    k = _level_input(h, k, tol)
    cert = comp_order(F, tol=tol)
    if cert.kind != "hybrid":
        raise NotHybrid(f"F must be a hybrid series (got {cert.kind})")
    return RiordanPair(_g_from_eigenvector(g0, F, h, k), F)


def construct_none(F: TruncatedSeries, r: int, g_tail: TruncatedSeries, tol=None) -> RiordanPair:
    """``(1 + g_tail, F)`` with ``F`` of finite order ``n`` and ``g_tail`` of order ``r``, ``n | r``."""
    cert = comp_order(F, tol=tol)
    if cert.kind != "finite_comp_at_trunc":
        raise PreconditionViolated(f"F must have finite compositional order (got {cert.kind})")
    if g_tail.order(tol) != r or r < 1:
        raise PreconditionViolated(f"g_tail must have order exactly r = {r}")
    if r % cert.n != 0:
        raise PreconditionViolated(f"r = {r} is not a multiple of the order {cert.n} of f1")
    return RiordanPair(g_tail + 1, F)


def order_certificate(A: RiordanPair, bound: int = DEFAULT_ORDER_BOUND, tol=None) -> OrderCertificate:
    return comp_order(A.F, bound, tol)


__all__ = [
    "FULL",
    "LEVEL",
    "NONE",
    "UNDETERMINED",
    "EigenReport",
    "LevelEigenvector",
    "Linearizer",
    "RecognitionVerdict",
    "classify",
    "construct_full",
    "construct_level_k",
    "construct_none",
    "diagonalize",
    "eigenvalue_of_level",
    "is_eigenvector",
    "iterate",
    "linearize",
    "primary_eigenvector",
    "primary_from_level_k",
    "recognition",
    "solve_level_k",
]
