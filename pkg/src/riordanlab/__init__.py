"""Riordan matrices over truncated power series.

Exact (rational) and complex arithmetic on truncated series, the Riordan group,
eigenvector classification, pseudo-involution singular values and stabilizers.
"""

from .errors import RiordanError
from .expr import evaluate, parse, to_text
from .fields import C64, RAT, field_by_name
from .matrix import DenseMatrix
from .riordan import AlmostRiordanTriple, RiordanPair, pascal
from .series import TruncatedSeries, format_series

__version__ = "0.1.0"

__all__ = [
    "AlmostRiordanTriple",
    "C64",
    "DenseMatrix",
    "RAT",
    "RiordanError",
    "RiordanPair",
    "TruncatedSeries",
    "evaluate",
    "field_by_name",
    "format_series",
    "parse",
    "pascal",
    "to_text",
]
