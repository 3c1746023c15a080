"""Small dense square matrices with field entries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import RAT, Field


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    rows: tuple
    field: Field = RAT

    @classmethod
    def from_rows(cls, rows, field: Field = RAT):
        return cls(tuple(tuple(field.coerce(v) for v in r) for r in rows), field)

    @classmethod
    def identity(cls, n: int, field: Field = RAT):
        return cls(tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)), field)

    @classmethod
    def diag(cls, values, field: Field = RAT):
        vals = [field.coerce(v) for v in values]
        n = len(vals)
        return cls(tuple(tuple(vals[i] if i == j else field.zero for j in range(n)) for i in range(n)), field)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: DenseMatrix) -> DenseMatrix:
        n = self.n
        if other.n != n:
            raise ValueError("dimension mismatch")
        zero = self.field.zero
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                s = zero
                for a, b in zip(r, c):
                    if a != 0 and b != 0:
                        s += a * b
                row.append(s)
            out.append(tuple(row))
        return DenseMatrix(tuple(out), self.field)

    def matvec(self, v) -> list:
        return [sum((a * b for a, b in zip(r, v)), self.field.zero) for r in self.rows]

    @property
    def T(self) -> DenseMatrix:
        return DenseMatrix(tuple(zip(*self.rows)), self.field)

    def direct_sum_identity(self, k: int) -> DenseMatrix:
        """``I_k (+) self``."""
        f = self.field
        top = [tuple(f.one if i == j else f.zero for j in range(k + self.n)) for i in range(k)]
        bottom = [tuple([f.zero] * k) + r for r in self.rows]
        return DenseMatrix(tuple(top + bottom), f)

    def is_lower_triangular(self, tol=None) -> bool:
        return all(self.field.is_zero(self.rows[i][j], tol) for i in range(self.n) for j in range(i + 1, self.n))

    def equals(self, other: DenseMatrix, tol=None) -> bool:
        if self.n != other.n:
            return False
        return all(
            self.field.eq(a, b, tol) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def to_numpy(self) -> np.ndarray:
        if self.field.name == "rat":
            return np.array([[float(v) for v in r] for r in self.rows], dtype=float)
        return np.array(self.rows, dtype=complex)

    def to_lists(self) -> list:
        return [list(r) for r in self.rows]

    def __repr__(self):
        return f"DenseMatrix(n={self.n}, field={self.field.name})"


def sign_matrix(n: int, sign: int = 1, field: Field = RAT) -> DenseMatrix:
    """``M = sign * diag(1, -1, 1, -1, ...)``."""
    return DenseMatrix.diag([sign * (-1) ** i for i in range(n)], field)


def reversal_matrix(n: int, field: Field = RAT) -> DenseMatrix:
    """Backward identity ``P``."""
    return DenseMatrix(
        tuple(tuple(field.one if i + j == n - 1 else field.zero for j in range(n)) for i in range(n)), field
    )
