"""Coefficient fields.

Two realizations are supported: exact rationals (``fractions.Fraction``, always
in lowest terms with a positive denominator) and double-precision complex
numbers compared under an explicit tolerance.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Number

DEFAULT_TOL = 1e-10


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a non-negative integer, or None if ``n`` is not a k-th power."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    # Newton on integers, seeded above the root
    r = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    return r if r**k == n else None


class Field:
    name = "abstract"

    def coerce(self, value):
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def is_zero(self, a, tol: float | None = None) -> bool:
        raise NotImplementedError

    def eq(self, a, b, tol: float | None = None) -> bool:
        return self.is_zero(a - b, tol)

    def kth_roots(self, value, k: int) -> list:
        """All k-th roots of ``value`` that lie in the field."""
        raise NotImplementedError

    def is_real_positive(self, a, tol: float | None = None) -> bool | None:
        """True/False when ``a`` is real, None when it is not real."""
        raise NotImplementedError

    def serialize(self, a):
        raise NotImplementedError

    def display(self, a) -> str:
        """Short human-readable form for text output."""
        return str(a)

    def __repr__(self):
        return f"<{self.name} field>"


class RationalField(Field):
    name = "rat"

    def coerce(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, complex):
            if value.imag != 0:
                raise TypeError("complex value in rational field")
            value = value.real
        if isinstance(value, float):
            # floats are accepted only when they are exactly representable
            return Fraction(value)
        return Fraction(value)

    def is_zero(self, a, tol=None) -> bool:
        return a == 0

    def kth_roots(self, value, k):
        value = self.coerce(value)
        if k < 1:
            raise ValueError("k must be positive")
        if value == 0:
            return [Fraction(0)]
        p, q = abs(value.numerator), value.denominator
        rp, rq = integer_root(p, k), integer_root(q, k)
        if rp is None or rq is None:
            return []
        root = Fraction(rp, rq)
        if value > 0:
            return [root, -root] if k % 2 == 0 else [root]
        return [-root] if k % 2 == 1 else []

    def is_real_positive(self, a, tol=None):
        return a > 0

    def serialize(self, a):
        return str(a)


class ComplexField(Field):
    name = "c64"

    def __init__(self, tol: float = DEFAULT_TOL):
        self.tol = tol

    def coerce(self, value) -> complex:
        if isinstance(value, Fraction):
            return complex(float(value))
        return complex(value)

    def is_zero(self, a, tol=None) -> bool:
        return abs(a) <= (self.tol if tol is None else tol)

    def kth_roots(self, value, k):
        value = self.coerce(value)
        if value == 0:
            return [0j]
        r = abs(value) ** (1.0 / k)
        phi = cmath.phase(value)
        return [cmath.rect(r, (phi + 2 * math.pi * j) / k) for j in range(k)]

    def is_real_positive(self, a, tol=None):
        t = self.tol if tol is None else tol
        if abs(a.imag) > t:
            return None
        return a.real > 0

    def serialize(self, a):
        return {"re": float(f"{a.real:.17g}"), "im": float(f"{a.imag:.17g}")}

    def display(self, a) -> str:
        re_, im = a.real + 0.0, a.imag + 0.0
        if abs(im) <= self.tol * max(1.0, abs(re_)):
            return f"{re_:.10g}"
        if abs(re_) <= self.tol * max(1.0, abs(im)):
            return f"{im:.10g}j"
        return f"({re_:.10g}{im:+.10g}j)"

    def __eq__(self, other):
        return isinstance(other, ComplexField)

    def __hash__(self):
        return hash("c64")


RAT = RationalField()
C64 = ComplexField()


def field_by_name(name: str, tol: float = DEFAULT_TOL) -> Field:
    if name == "rat":
        return RAT
    if name == "c64":
        return ComplexField(tol)
    raise ValueError(f"unknown field {name!r} (expected 'rat' or 'c64')")


def same_field(a: Field, b: Field) -> bool:
    return a.name == b.name


def is_number(value) -> bool:
    return isinstance(value, Number)
