"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`RiordanError`;
the class name is what the CLI reports, so names are part of the interface.
"""


class RiordanError(Exception):
    """Base class for all domain errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


# series
class FieldMismatch(RiordanError):
    pass


class DivisionByNonUnit(RiordanError):
    pass


class CompositionRequiresZeroConstant(RiordanError):
    pass


class NotDelta(RiordanError):
    pass


class NotUnit(RiordanError):
    pass


class ConstantTermNotOne(RiordanError):
    pass


class OrderMismatch(RiordanError):
    pass


class BadBranch(RiordanError):
    pass


class ZeroElement(RiordanError):
    pass


class NotAPowerSeries(RiordanError):
    """Result would need negative powers of x."""


# riordan
class IndexBeyondTruncation(RiordanError):
    pass


# eigen
class Inconsistent(RiordanError):
    """No eigenvector of the requested level at this truncation."""

    def __init__(self, row: int, level: int | None = None):
        self.row = row
        self.level = level
        msg = f"row {row} of the eigen-system is inconsistent"
        if level is not None:
            msg += f" (level {level})"
        super().__init__(msg)


class HybridNotLinearizable(RiordanError):
    pass


class UndeterminedAtTrunc(RiordanError):
    pass


class NotDiagonalizable(RiordanError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class HybridNotAllowed(RiordanError):
    pass


class NotHybrid(RiordanError):
    pass


class PreconditionViolated(RiordanError):
    pass


# pseudo
class NoConvergence(RiordanError):
    pass


# stabilizer
class NoSecondEntry(RiordanError):
    pass


class DegenerateD(RiordanError):
    pass


class NotMonomial(RiordanError):
    pass


class NotAdmissible(RiordanError):
    pass


# expression parsing
class ExprSyntaxError(RiordanError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at byte offset {offset}")


class UnknownIdentifier(RiordanError):
    def __init__(self, ident: str, offset: int):
        self.ident = ident
        self.offset = offset
        super().__init__(f"unknown identifier {ident!r} at byte offset {offset}")


class EvaluationError(RiordanError):
    pass
