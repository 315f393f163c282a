"""Expression language for analytic functions of ``z``.

Grammar (whitespace insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?
    atom   := number | "z" | "i" | "pi" | "(" expr ")" | ident "(" expr ")"
    ident  := exp | log | sqrt | sin | cos

``^`` is right associative and binds tighter than unary minus, so
``-z^2`` is ``-(z^2)`` and ``2^-1`` is ``2^(-1)``.  Exponents must be free
of ``z``.  ``log``, ``sqrt`` and non-integer powers use principal branches.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import EvaluationError, ParseError, UnknownIdentifierError
from .jets import Jet, JetDomainError

FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos")
CONSTANTS = {"i": 1j, "pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Const, Var, Neg, BinOp, Call]

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG_PREC = 3
_ATOM_PREC = 5


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass
class _Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    offset: int  # 1-based byte offset


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0

    def byte_offset(i: int) -> int:
        return len(source[:i].encode("utf-8")) + 1

    while True:
        while pos < len(source) and source[pos].isspace():
            pos += 1
        if pos >= len(source):
            tokens.append(_Token("end", "", byte_offset(pos)))
            return tokens
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ParseError(
                f"unexpected character {source[pos]!r}",
                byte_offset(pos),
                frozenset({"number", "identifier", "operator"}),
            )
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(_Token(kind, m.group(kind), byte_offset(start)))
        pos = m.end()


# -- parser ------------------------------------------------------------------

_ATOM_START = frozenset({"number", "z", "i", "pi", "(", "-", *FUNCTIONS})


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def _is_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def _expect_op(self, op: str) -> None:
        if not self._is_op(op):
            raise ParseError(f"unexpected {self._describe()}", self.tok.offset, frozenset({op}))
        self.i += 1

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "end" else f"token {self.tok.text!r}"

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(
                f"unexpected {self._describe()}",
                self.tok.offset,
                frozenset({"+", "-", "*", "/", "^", "end of input"}),
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is_op("+", "-"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self._is_op("*", "/"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self._is_op("-"):
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self._is_op("^"):
            offset = self.tok.offset
            self.i += 1
            exponent = self.unary()
            if _depends_on_z(exponent):
                raise ParseError("exponent must not depend on z", offset)
            return BinOp("^", base, exponent)
        return base

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "z":
                return Var()
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                self._expect_op("(")
                arg = self.expr()
                self._expect_op(")")
                return Call(tok.text, arg)
            raise UnknownIdentifierError(
                f"unknown identifier {tok.text!r}", tok.offset, frozenset({"z", "i", "pi", *FUNCTIONS})
            )
        if self._is_op("("):
            self.i += 1
            node = self.expr()
            self._expect_op(")")
            return node
        raise ParseError(f"unexpected {self._describe()}", tok.offset, _ATOM_START)


def _depends_on_z(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Num, Const)):
        return False
    if isinstance(node, Neg):
        return _depends_on_z(node.operand)
    if isinstance(node, Call):
        return _depends_on_z(node.arg)
    return _depends_on_z(node.left) or _depends_on_z(node.right)


# -- printer -----------------------------------------------------------------


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _NEG_PREC
    return _ATOM_PREC


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def to_source(node: Node) -> str:
    """Canonical text for ``node``; ``parse(to_source(n)).root == n``."""
    if isinstance(node, Num):
        return _format_number(node.value)
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        if _prec(node.operand) < _NEG_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    left, right = to_source(node.left), to_source(node.right)
    p = _PREC[node.op]
    if node.op == "^":
        if _prec(node.left) <= p:
            left = f"({left})"
        if _prec(node.right) < _NEG_PREC:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}"


# -- evaluation --------------------------------------------------------------


@dataclass(frozen=True)
class Jet3:
    """Value and first three derivatives at a point.

    Entries above ``order`` are NaN.
    """

    d0: complex
    d1: complex
    d2: complex
    d3: complex
    order: int = 3

    @classmethod
    def from_jet(cls, jet: Jet) -> "Jet3":
        vals = [jet.derivative(k) if k <= jet.order else np.full(jet.shape, np.nan + 0j) for k in range(4)]
        vals = [v[()] if np.ndim(v) == 0 else v for v in vals]
        return cls(*vals, order=min(jet.order, 3))


def _constant_value(node: Node) -> complex:
    return complex(_evaluate(node, Jet.constant(0.0, 0)).value)


def _evaluate(node: Node, z: Jet) -> Jet:
    if isinstance(node, Var):
        return z
    if isinstance(node, Num):
        return Jet.constant(node.value, z.order, z.shape)
    if isinstance(node, Const):
        return Jet.constant(CONSTANTS[node.name], z.order, z.shape)
    try:
        if isinstance(node, Neg):
            return -_evaluate(node.operand, z)
        if isinstance(node, Call):
            return getattr(_evaluate(node.arg, z), node.func)()
        if node.op == "^":
            return _evaluate(node.left, z).power(_constant_value(node.right))
        a = _evaluate(node.left, z)
        b = _evaluate(node.right, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    except JetDomainError as exc:
        point = None
        if exc.index is not None:
            point = complex(z.value[exc.index]) if exc.index else complex(z.value.ravel()[0])
        err = EvaluationError(str(exc), z=point, subexpression=to_source(node))
        raise err from exc


@dataclass(frozen=True)
class FunctionExpr:
    """A parsed analytic function of ``z``."""

    root: Node
    source: str = field(default="", compare=False)

    def __str__(self) -> str:
        return to_source(self.root)

    def jet(self, z, order: int = 3) -> Jet:
        """Full Taylor jet of the function at ``z`` (scalar or array)."""
        return _evaluate(self.root, Jet.variable(z, order))

    def __call__(self, z):
        value = self.jet(z, 0).value
        return value[()] if np.ndim(value) == 0 else value


def parse(source: str) -> FunctionExpr:
    return FunctionExpr(_Parser(source).parse(), source)


def eval_jet(fn: FunctionExpr, z, order: int = 3) -> Jet3:
    if not 0 <= order <= 3:
        raise ValueError("order must lie in 0..3")
    return Jet3.from_jet(fn.jet(z, order))


@dataclass(frozen=True)
class ClassAReport:
    is_class_a: bool
    f_at_0: complex
    fprime_at_0: complex


CLASS_A_TOL = 1e-10


def class_a_check(fn, tol: float = CLASS_A_TOL) -> ClassAReport:
    """Check the normalization f(0) = 0, f'(0) = 1."""
    jet = fn.jet(0.0, 1)
    f0, f1 = complex(jet.value), complex(jet.derivative(1))
    ok = abs(f0) <= tol and abs(f1 - 1) <= tol
    return ClassAReport(ok, f0, f1)
