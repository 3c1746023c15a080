"""Series expressions: a small recursive-descent parser, printer and evaluator.

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' uint)?
    atom   := rational | 'x' | '(' expr ')' | 'sqrt' '(' expr ')' | builtin

``p/q`` with two integer literals is read as one rational literal unless it
is itself the right operand of ``/`` or is followed by ``^``; so ``x/2/3``
keeps left associativity and ``2/3^2`` means ``2/(3^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConstantTermNotOne,
    DivisionByNonUnit,
    EvaluationError,
    ExprSyntaxError,
    NotAPowerSeries,
    UnknownIdentifier,
)
from .fields import RAT, Field
from .series import (
    DEFAULT_DEG,
    TruncatedSeries,
    div,
    div_general,
    mul,
    nth_root_unit,
    power,
)


# -- AST ------------------------------------------------------------------
@dataclass(frozen=True)
class Rational:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Sqrt:
    operand: object


@dataclass(frozen=True)
class Builtin:
    name: str


BUILTINS = {
    "pascal_g": "1/(1-x)",
    "pascal_f": "x/(1-x)",
    "aigner_g": "(1+x-sqrt(1-2*x-3*x^2))/(2*x)",
    "catalan": "(1-sqrt(1-4*x))/(2*x)",
}


# -- lexer ----------------------------------------------------------------
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # int, ident, op, end
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        offset = len(text[:start].encode())
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), offset))
        elif m.group(2) is not None:
            toks.append(_Tok("ident", m.group(2), offset))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", offset)
            toks.append(_Tok("op", ch, offset))
        pos = m.end()
    toks.append(_Tok("end", "", len(text.encode())))
    return toks


# -- parser ---------------------------------------------------------------
class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, op: str) -> bool:
        t = self.peek()
        if t.kind == "op" and t.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            t = self.peek()
            found = t.text or "end of input"
            raise ExprSyntaxError(f"expected {op!r}, found {found!r}", t.offset)

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ExprSyntaxError(f"unexpected {t.text!r}", t.offset)
        return node

    def expr(self):
        node = self.term()
        while True:
            if self.accept("+"):
                node = Add(node, self.term())
            elif self.accept("-"):
                node = Sub(node, self.term())
            else:
                return node

    def term(self):
        node = self.unary(False)
        while True:
            if self.accept("*"):
                node = Mul(node, self.unary(False))
            elif self.accept("/"):
                node = Div(node, self.unary(True))
            else:
                return node

    def unary(self, divisor: bool):
        if self.accept("-"):
            return Neg(self.unary(divisor))
        return self.factor(divisor)

    def factor(self, divisor: bool):
        base = self.atom(divisor)
        if self.accept("^"):
            t = self.peek()
            if t.kind != "int":
                raise ExprSyntaxError("exponent must be a non-negative integer", t.offset)
            self.take()
            return Pow(base, int(t.text))
        return base

    def _rational_ahead(self) -> bool:
        nxt, den, after = self.peek(1), self.peek(2), self.peek(3)
        return (
            nxt.kind == "op"
            and nxt.text == "/"
            and den.kind == "int"
            and not (after.kind == "op" and after.text == "^")
        )

    def atom(self, divisor: bool):
        t = self.peek()
        if t.kind == "int":
            if not divisor and self._rational_ahead():
                self.i += 3
                q = int(self.toks[self.i - 1].text)
                if q == 0:
                    raise ExprSyntaxError("zero denominator", self.toks[self.i - 1].offset)
                return Rational(Fraction(int(t.text), q))
            self.take()
            return Rational(Fraction(int(t.text)))
        if t.kind == "ident":
            self.take()
            if t.text == "x":
                return Var()
            if t.text == "sqrt":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Sqrt(inner)
            if t.text in BUILTINS:
                return Builtin(t.text)
            raise UnknownIdentifier(t.text, t.offset)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        found = t.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", t.offset)


def parse(text: str):
    return _Parser(text).parse()


# -- printer --------------------------------------------------------------
_ATOM = 5


def _prec(node) -> int:
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, (Mul, Div)):
        return 2
    if isinstance(node, Rational) and node.value.denominator != 1:
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return _ATOM


def _wrap(node, need: int) -> str:
    s = to_text(node)
    return f"({s})" if _prec(node) < need else s


def to_text(node) -> str:
    """Canonical text; ``parse(to_text(e)) == e`` for every parsed ``e``."""
    if isinstance(node, Rational):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Builtin):
        return node.name
    if isinstance(node, Sqrt):
        return f"sqrt({to_text(node.operand)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, 3)
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _ATOM)}^{node.exponent}"
    if isinstance(node, Add):
        return f"{_wrap(node.left, 1)} + {_wrap(node.right, 2)}"
    if isinstance(node, Sub):
        return f"{_wrap(node.left, 1)} - {_wrap(node.right, 2)}"
    if isinstance(node, Mul):
        return f"{_wrap(node.left, 2)}*{_wrap(node.right, 3)}"
    if isinstance(node, Div):
        right = node.right
        if isinstance(right, Rational) and right.value.denominator == 1:
            # an integer divisor printed bare would fuse into a literal
            return f"{_wrap(node.left, 2)}/({to_text(right)})"
        return f"{_wrap(node.left, 2)}/{_wrap(right, 3)}"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation -----------------------------------------------------------
def _sqrt(a: TruncatedSeries, tol) -> TruncatedSeries:
    field = a.field
    a0 = a.coeffs[0]
    if field.is_zero(a0, tol):
        raise ConstantTermNotOne("sqrt needs a nonzero constant term")
    roots = field.kth_roots(a0, 2)
    if not roots:
        raise ConstantTermNotOne(f"constant term {a0} has no square root in the field")
    r = roots[0]
    return nth_root_unit(a.scale(1 / a0), 2, tol).scale(r)


def _eval(node, deg: int, field: Field, tol):
    if isinstance(node, Rational):
        return TruncatedSeries.constant(node.value, deg, field)
    if isinstance(node, Var):
        return TruncatedSeries.x(deg, field)
    if isinstance(node, Builtin):
        return _eval(parse(BUILTINS[node.name]), deg, field, tol)
    if isinstance(node, Neg):
        return -_eval(node.operand, deg, field, tol)
    if isinstance(node, Add):
        return _eval(node.left, deg, field, tol) + _eval(node.right, deg, field, tol)
    if isinstance(node, Sub):
        return _eval(node.left, deg, field, tol) - _eval(node.right, deg, field, tol)
    if isinstance(node, Mul):
        return mul(_eval(node.left, deg, field, tol), _eval(node.right, deg, field, tol))
    if isinstance(node, Div):
        num = _eval(node.left, deg, field, tol)
        den = _eval(node.right, deg, field, tol)
        if den.order(tol) == 0:
            return div(num, den)
        return div_general(num, den, tol)
    if isinstance(node, Pow):
        return power(_eval(node.base, deg, field, tol), node.exponent)
    if isinstance(node, Sqrt):
        return _sqrt(_eval(node.operand, deg, field, tol), tol)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node, deg: int = DEFAULT_DEG, field: Field = RAT, tol=None, max_guard: int = 64) -> TruncatedSeries:
    """Evaluate to a series known through ``x^deg``.

    Division by a series of positive order costs precision, so evaluation is
    retried at a higher internal degree until the result reaches ``deg``.
    """
    if isinstance(node, str):
        node = parse(node)
    guard = 0
    while True:
        try:
            s = _eval(node, deg + guard, field, tol)
        except NotAPowerSeries as exc:
            raise EvaluationError(str(exc)) from None
        except DivisionByNonUnit as exc:
            raise EvaluationError(str(exc)) from None
        if s.deg >= deg or s.exact:
            return s.truncate(deg)
        lost = deg - s.deg
        if guard + lost > max_guard:
            raise EvaluationError(f"could not reach degree {deg} (precision loss beyond {max_guard})")
        guard += lost


__all__ = [
    "Add",
    "BUILTINS",
    "Builtin",
    "Div",
    "Mul",
    "Neg",
    "Pow",
    "Rational",
    "Sqrt",
    "Sub",
    "Var",
    "evaluate",
    "parse",
    "to_text",
]
