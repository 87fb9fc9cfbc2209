"""Infix expression trees for radial metric profiles.

A profile is a function of the radius variable ``s`` with optional named
parameters, written in plain infix notation::

    1 + s^2 - m/s
    1 + s^2 - m/s + c/s^2

The parser produces an immutable tree that supports

* float evaluation with late parameter binding,
* exact rational evaluation (used by callers that need cancellation-free
  differences at large radius),
* symbolic differentiation in ``s`` with constant folding of trivial
  subtrees.

``^`` is restricted to integer literal exponents so that derivatives stay
inside the language.  The recognised functions are ``exp``, ``log`` and
``sqrt``.  Trees are immutable and safe to share between threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import DomainError, EvaluationError, ParseError

__all__ = [
    "Expression",
    "parse",
    "evaluate",
    "differentiate",
    "parameters",
    "parse_profile_text",
    "load_profile_file",
]

_FUNCTIONS = ("exp", "log", "sqrt")

_NO_PARAMS: Mapping[str, float] = {}


class ExactUnsupported(Exception):
    """Internal: tree contains a node without an exact rational value."""


class Expression:
    """Base class for expression nodes.

    Instances are frozen dataclasses; all methods are pure.
    """

    def evaluate(self, s: float, params: Mapping[str, float] | None = None) -> float:
        """Evaluate at radius ``s`` with the given parameter bindings."""
        return self._eval(float(s), params if params is not None else _NO_PARAMS)

    def evaluate_exact(self, s, params: Mapping[str, Fraction] | None = None) -> Fraction:
        """Evaluate with exact rational arithmetic.

        Raises ExactUnsupported if the tree contains exp/log/sqrt.  Domain
        violations (division by zero) raise DomainError exactly as in the
        float path.
        """
        return self._eval_exact(Fraction(s), params if params is not None else _NO_PARAMS)

    def derivative(self) -> "Expression":
        """Symbolic d/ds with constant folding of trivial subtrees."""
        raise NotImplementedError

    def parameters(self) -> frozenset:
        """Names of free parameters (everything except ``s``)."""
        raise NotImplementedError

    def has_transcendental(self) -> bool:
        """True if the tree contains an exp/log/sqrt node."""
        raise NotImplementedError

    def _eval(self, s, params):
        raise NotImplementedError

    def _eval_exact(self, s, params):
        raise NotImplementedError

    # precedence used for printing; higher binds tighter
    _prec = 9

    def _fmt(self, parent_prec: int) -> str:
        text = self._text()
        if self._prec < parent_prec:
            return "(" + text + ")"
        return text

    def _text(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self._text()


@dataclass(frozen=True)
class Num(Expression):
    value: float

    _prec = 9

    def _eval(self, s, params):
        return self.value

    def _eval_exact(self, s, params):
        return Fraction(self.value)

    def derivative(self):
        return Num(0.0)

    def parameters(self):
        return frozenset()

    def has_transcendental(self):
        return False

    def _text(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var(Expression):
    """The radius variable ``s``."""

    _prec = 9

    def _eval(self, s, params):
        return s

    def _eval_exact(self, s, params):
        return s

    def derivative(self):
        return Num(1.0)

    def parameters(self):
        return frozenset()

    def has_transcendental(self):
        return False

    def _text(self):
        return "s"


@dataclass(frozen=True)
class Param(Expression):
    name: str

    _prec = 9

    def _eval(self, s, params):
        try:
            return float(params[self.name])
        except KeyError:
            raise EvaluationError("unbound parameter '%s'" % self.name) from None

    def _eval_exact(self, s, params):
        try:
            return Fraction(params[self.name])
        except KeyError:
            raise EvaluationError("unbound parameter '%s'" % self.name) from None

    def derivative(self):
        return Num(0.0)

    def parameters(self):
        return frozenset((self.name,))

    def has_transcendental(self):
        return False

    def _text(self):
        return self.name


@dataclass(frozen=True)
class Neg(Expression):
    arg: Expression

    _prec = 2

    def _eval(self, s, params):
        return -self.arg._eval(s, params)

    def _eval_exact(self, s, params):
        return -self.arg._eval_exact(s, params)

    def derivative(self):
        return _neg(self.arg.derivative())

    def parameters(self):
        return self.arg.parameters()

    def has_transcendental(self):
        return self.arg.has_transcendental()

    def _text(self):
        return "-" + self.arg._fmt(self._prec + 1)


@dataclass(frozen=True)
class Add(Expression):
    left: Expression
    right: Expression

    _prec = 1

    def _eval(self, s, params):
        return self.left._eval(s, params) + self.right._eval(s, params)

    def _eval_exact(self, s, params):
        return self.left._eval_exact(s, params) + self.right._eval_exact(s, params)

    def derivative(self):
        return _add(self.left.derivative(), self.right.derivative())

    def parameters(self):
        return self.left.parameters() | self.right.parameters()

    def has_transcendental(self):
        return self.left.has_transcendental() or self.right.has_transcendental()

    def _text(self):
        return self.left._fmt(self._prec) + " + " + self.right._fmt(self._prec + 1)


@dataclass(frozen=True)
class Sub(Expression):
    left: Expression
    right: Expression

    _prec = 1

    def _eval(self, s, params):
        return self.left._eval(s, params) - self.right._eval(s, params)

    def _eval_exact(self, s, params):
        return self.left._eval_exact(s, params) - self.right._eval_exact(s, params)

    def derivative(self):
        return _sub(self.left.derivative(), self.right.derivative())

    def parameters(self):
        return self.left.parameters() | self.right.parameters()

    def has_transcendental(self):
        return self.left.has_transcendental() or self.right.has_transcendental()

    def _text(self):
        return self.left._fmt(self._prec) + " - " + self.right._fmt(self._prec + 1)


@dataclass(frozen=True)
class Mul(Expression):
    left: Expression
    right: Expression

    _prec = 3

    def _eval(self, s, params):
        return self.left._eval(s, params) * self.right._eval(s, params)

    def _eval_exact(self, s, params):
        return self.left._eval_exact(s, params) * self.right._eval_exact(s, params)

    def derivative(self):
        da = self.left.derivative()
        db = self.right.derivative()
        return _add(_mul(da, self.right), _mul(self.left, db))

    def parameters(self):
        return self.left.parameters() | self.right.parameters()

    def has_transcendental(self):
        return self.left.has_transcendental() or self.right.has_transcendental()

    def _text(self):
        return self.left._fmt(self._prec) + "*" + self.right._fmt(self._prec + 1)


@dataclass(frozen=True)
class Div(Expression):
    left: Expression
    right: Expression

    _prec = 3

    def _eval(self, s, params):
        num = self.left._eval(s, params)
        den = self.right._eval(s, params)
        if den == 0.0:
            raise DomainError("division by zero in '%s'" % self)
        return num / den

    def _eval_exact(self, s, params):
        num = self.left._eval_exact(s, params)
        den = self.right._eval_exact(s, params)
        if den == 0:
            raise DomainError("division by zero in '%s'" % self)
        return num / den

    def derivative(self):
        da = self.left.derivative()
        db = self.right.derivative()
        num = _sub(_mul(da, self.right), _mul(self.left, db))
        return _div(num, _pow(self.right, 2))

    def parameters(self):
        return self.left.parameters() | self.right.parameters()

    def has_transcendental(self):
        return self.left.has_transcendental() or self.right.has_transcendental()

    def _text(self):
        return self.left._fmt(self._prec) + "/" + self.right._fmt(self._prec + 1)


def _ipow(base, exponent):
    # binary exponentiation; keeps s^2 bitwise equal to s*s
    result = 1.0
    acc = base
    k = exponent
    while k:
        if k & 1:
            result = result * acc
        k >>= 1
        if k:
            acc = acc * acc
    return result


@dataclass(frozen=True)
class Pow(Expression):
    base: Expression
    exponent: int

    _prec = 5

    def _eval(self, s, params):
        b = self.base._eval(s, params)
        n = self.exponent
        if n >= 0:
            return _ipow(b, n)
        if b == 0.0:
            raise DomainError("zero raised to negative power in '%s'" % self)
        return 1.0 / _ipow(b, -n)

    def _eval_exact(self, s, params):
        b = self.base._eval_exact(s, params)
        n = self.exponent
        if n < 0 and b == 0:
            raise DomainError("zero raised to negative power in '%s'" % self)
        return b ** n

    def derivative(self):
        n = self.exponent
        inner = self.base.derivative()
        return _mul(_mul(Num(float(n)), _pow(self.base, n - 1)), inner)

    def parameters(self):
        return self.base.parameters()

    def has_transcendental(self):
        return self.base.has_transcendental()

    def _text(self):
        # base is parenthesized unless atomic, so (s^2)^3 round-trips
        return self.base._fmt(self._prec + 1) + "^" + str(self.exponent)


@dataclass(frozen=True)
class Call(Expression):
    func: str
    arg: Expression

    _prec = 9

    def _eval(self, s, params):
        x = self.arg._eval(s, params)
        try:
            if self.func == "exp":
                return math.exp(x)
            if self.func == "log":
                return math.log(x)
            return math.sqrt(x)
        except (ValueError, OverflowError):
            raise DomainError(
                "%s of out-of-range value %r in '%s'" % (self.func, x, self)
            ) from None

    def _eval_exact(self, s, params):
        raise ExactUnsupported(self.func)

    def derivative(self):
        inner = self.arg.derivative()
        if self.func == "exp":
            return _mul(Call("exp", self.arg), inner)
        if self.func == "log":
            return _div(inner, self.arg)
        return _div(inner, _mul(Num(2.0), Call("sqrt", self.arg)))

    def parameters(self):
        return self.arg.parameters()

    def has_transcendental(self):
        return True

    def _text(self):
        return "%s(%s)" % (self.func, self.arg)


# ---------------------------------------------------------------------------
# folding constructors (used by derivative(); only trivial constant folds)

def _is_const(e, value=None):
    if not isinstance(e, Num):
        return False
    return value is None or e.value == value


def _add(a, b):
    if _is_const(a) and _is_const(b):
        return Num(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def _sub(a, b):
    if _is_const(a) and _is_const(b):
        return Num(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return _neg(b)
    return Sub(a, b)


def _mul(a, b):
    if _is_const(a) and _is_const(b):
        return Num(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return Num(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def _div(a, b):
    if _is_const(a, 0.0):
        return Num(0.0)
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return Num(a.value / b.value)
    return Div(a, b)


def _pow(base, n):
    if n == 0:
        return Num(1.0)
    if n == 1:
        return base
    if _is_const(base) and (n >= 0 or base.value != 0.0):
        return Num(Pow(base, n)._eval(0.0, _NO_PARAMS))
    return Pow(base, n)


def _neg(a):
    if _is_const(a):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | end
    text: str
    pos: int


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError("unexpected character %r" % text[pos], pos)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect_op(self, op):
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ParseError("expected '%s'" % op, tok.pos)
        return self.advance()

    def parse(self):
        expr = self.parse_sum()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError("unexpected %r" % tok.text, tok.pos)
        return expr

    def parse_sum(self):
        expr = self.parse_term()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.advance()
                rhs = self.parse_term()
                expr = Add(expr, rhs) if tok.text == "+" else Sub(expr, rhs)
            else:
                return expr

    def parse_term(self):
        expr = self.parse_unary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.advance()
                rhs = self.parse_unary()
                expr = Mul(expr, rhs) if tok.text == "*" else Div(expr, rhs)
            else:
                return expr

    def parse_unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "^":
                self.advance()
                expr = Pow(expr, self.parse_int_literal())
            else:
                return expr

    def parse_int_literal(self):
        sign = 1
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            sign = -1
            tok = self.peek()
        if tok.kind != "number":
            raise ParseError("exponent must be an integer literal", tok.pos)
        if not tok.text.isdigit():
            raise ParseError(
                "exponent must be an integer literal, got %r" % tok.text, tok.pos
            )
        self.advance()
        return sign * int(tok.text)

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "(":
                if tok.text not in _FUNCTIONS:
                    raise ParseError("unknown function '%s'" % tok.text, tok.pos)
                self.advance()
                arg = self.parse_sum()
                self.expect_op(")")
                return Call(tok.text, arg)
            if tok.text in _FUNCTIONS:
                raise ParseError(
                    "function '%s' requires an argument list" % tok.text, tok.pos
                )
            if tok.text == "s":
                return Var()
            return Param(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            expr = self.parse_sum()
            self.expect_op(")")
            return expr
        raise ParseError("unexpected %r" % (tok.text or "end of input"), tok.pos)


def parse(text: str) -> Expression:
    """Parse infix profile text into an expression tree."""
    return _Parser(text).parse()


def evaluate(expr: Expression, s: float, params: Mapping[str, float] | None = None) -> float:
    """Evaluate ``expr`` at radius ``s``; see Expression.evaluate."""
    return expr.evaluate(s, params)


def differentiate(expr: Expression) -> Expression:
    """Symbolic d/ds of ``expr`` with trivial constant folding."""
    return expr.derivative()


def parameters(expr: Expression) -> frozenset:
    """Free parameter names appearing in ``expr``."""
    return expr.parameters()


def parse_profile_text(text: str) -> dict:
    """Parse ``name = expression`` lines into an ordered dict.

    Blank lines and lines starting with ``#`` are skipped.  Inline
    ``# comments`` after an expression are allowed.
    """
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition("=")
        name = name.strip()
        if not sep or not body.strip():
            raise ValueError("line %d: expected 'name = expression'" % lineno)
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
            raise ValueError("line %d: invalid profile name %r" % (lineno, name))
        if name in out:
            raise ValueError("line %d: duplicate profile name %r" % (lineno, name))
        try:
            out[name] = parse(body.strip())
        except ParseError as exc:
            raise ParseError(exc.reason, exc.offset, line=lineno) from None
    return out


def load_profile_file(path) -> dict:
    """Read a profile file from disk; see parse_profile_text."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_profile_text(handle.read())
