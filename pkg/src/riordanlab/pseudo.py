"""Pseudo-involutions and their singular values.

A Riordan matrix ``A`` is a pseudo-involution when ``(A M)^2 = I`` with
``M = diag(1, -1, 1, ...)``. The singular values of its truncations pair up as
``sigma_i * sigma_{n+1-i} = 1``; the checks here verify that numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, PreconditionViolated
from .matrix import DenseMatrix, reversal_matrix, sign_matrix
from .riordan import RiordanPair, truncate

DEFAULT_SWEEPS = 60


@dataclass(frozen=True)
class SvdFactors:
    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.sigma) @ self.V.T


@dataclass(frozen=True)
class PairReport:
    ok: bool
    pairs: list  # (i, j, sigma_i, sigma_j, defect), 1-based indices

    @property
    def max_defect(self) -> float:
        return max((p[4] for p in self.pairs), default=0.0)


def is_pseudo_involution(A: RiordanPair, n: int, tol=None) -> bool:
    T = truncate(A, n)
    M = sign_matrix(n, 1, A.field)
    AM = T @ M
    return (AM @ AM).equals(DenseMatrix.identity(n, A.field), tol)


def _real_array(A) -> np.ndarray:
    X = A.to_numpy() if isinstance(A, DenseMatrix) else np.asarray(A)
    if np.iscomplexobj(X):
        if np.max(np.abs(X.imag), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(X.real), initial=0.0)):
            raise PreconditionViolated("singular values are computed for real matrices only")
        X = X.real
    return np.array(X, dtype=float)


def _complete_basis(U: np.ndarray, done: list) -> None:
    """Fill columns of ``U`` not in ``done`` with an orthonormal completion."""
    n = U.shape[0]
    for j in range(U.shape[1]):
        if j in done:
            continue
        for e in np.eye(n):
            v = e - U[:, done] @ (U[:, done].T @ e)
            nv = np.linalg.norm(v)
            if nv > 1e-8:
                U[:, j] = v / nv
                done.append(j)
                break


def svd(A, tol: float = 1e-15, max_sweeps: int = DEFAULT_SWEEPS) -> SvdFactors:
    """Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

    Columns of a working copy are rotated pairwise until every pair is
    orthogonal to relative precision ``tol``; singular values are the final
    column norms, sorted descending (ties keep column order).
    """
    W = _real_array(A)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("svd expects a square matrix")
    n = W.shape[1]
    V = np.eye(n)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = W[:, p] @ W[:, p]
                beta = W[:, q] @ W[:, q]
                gamma = W[:, p] @ W[:, q]
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or gamma == 0.0:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                wp, wq = W[:, p].copy(), W[:, q].copy()
                W[:, p] = c * wp - s * wq
                W[:, q] = s * wp + c * wq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise NoConvergence(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")
    sigma = np.linalg.norm(W, axis=0)
    order = sorted(range(n), key=lambda j: (-sigma[j], j))
    sigma = sigma[order]
    W = W[:, order]
    V = V[:, order]
    U = np.zeros((n, n))
    scale = sigma[0] if n else 0.0
    done = []
    for j in range(n):
        if sigma[j] > 1e-300 and sigma[j] > scale * 1e-14:
            U[:, j] = W[:, j] / sigma[j]
            done.append(j)
    if len(done) < n:
        _complete_basis(U, done)
    return SvdFactors(U, sigma, V, sweeps)


def reciprocal_pairs_check(sigma, tol: float = 1e-7) -> PairReport:
    """``|sigma_i * sigma_{n+1-i} - 1| <= tol`` for every ``i``."""
    s = [float(v) for v in sigma]
    n = len(s)
    pairs = []
    for i in range((n + 1) // 2):
        j = n - 1 - i
        pairs.append((i + 1, j + 1, s[i], s[j], abs(s[i] * s[j] - 1.0)))
    return PairReport(all(p[4] <= tol for p in pairs), pairs)


def structure_check(A, factors: SvdFactors, tol: float = 1e-8) -> bool:
    """Verify ``A^T A = (M U P) Sigma^2 (M U P)^T`` to ``tol`` in max norm.

    This is the sign-robust form of ``V = M U P``: it holds for any orthogonal
    ``U`` diagonalizing ``A A^T`` once the singular values pair up.
    """
    X = _real_array(A)
    n = X.shape[0]
    M = np.diag([(-1.0) ** i for i in range(n)])
    P = np.fliplr(np.eye(n))
    MUP = M @ factors.U @ P
    rhs = MUP @ np.diag(factors.sigma**2) @ MUP.T
    return float(np.max(np.abs(X.T @ X - rhs))) <= tol


def riordan_orthogonality_check(B: RiordanPair, n: int, tol=None) -> bool:
    """``B_n B_n^T = I_n`` (exact for rational pairs)."""
    T = truncate(B, n)
    return (T @ T.T).equals(DenseMatrix.identity(n, B.field), tol)


def similarity_check(sigma, tol: float = 1e-7) -> bool:
    """Eigenvalues of ``S = A A^T`` coincide with those of ``S^-1``."""
    lam = np.sort(np.asarray(sigma, dtype=float) ** 2)
    inv = np.sort(1.0 / lam)
    return bool(np.all(np.abs(lam - inv) <= tol * np.maximum(1.0, lam)))


def pairing_defects(A: RiordanPair, sizes) -> list:
    """Largest reciprocal-pair defect of the ``n x n`` truncation for each ``n``."""
    out = []
    for n in sizes:
        f = svd(truncate(A, n))
        out.append((n, reciprocal_pairs_check(f.sigma).max_defect))
    return out


__all__ = [
    "PairReport",
    "SvdFactors",
    "is_pseudo_involution",
    "pairing_defects",
    "reciprocal_pairs_check",
    "reversal_matrix",
    "riordan_orthogonality_check",
    "sign_matrix",
    "similarity_check",
    "structure_check",
    "svd",
]
