"""Parser and evaluator for scalar fields of the coordinates x1, x2, x3.

Grammar (whitespace-insensitive)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | atom ('^' ['-'] number)?
    atom   := number | 'x1' | 'x2' | 'x3' | func '(' expr ')' | '(' expr ')'
    func   := sqrt | exp | log | sin | cos

Exponents are numeric literals only. Unary minus binds tighter than '*'
but looser than '^', so ``-x1^2`` means ``-(x1^2)``. There is no implicit
multiplication: ``2x1`` is a syntax error.

Parsed expressions are immutable trees; evaluation over plain floats
(:func:`eval_value`) and over jets (:func:`eval_jet`) walks the same tree
with the same scalar primitives, so the value channels agree exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import EvalDomainError, ExprSyntaxError
from .jets import Jet2

FUNCTIONS = ("sqrt", "exp", "log", "sin", "cos")
COORDS = ("x1", "x2", "x3")


# -- syntax tree --------------------------------------------------------------


class Node:
    """Base class of expression tree nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Node):
    value: float
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Coord(Node):
    index: int  # 1..3
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Unary(Node):
    op: str  # 'neg' or a FUNCTIONS name
    arg: Node
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Binary(Node):
    op: str  # '+', '-', '*', '/'
    left: Node
    right: Node
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Power(Node):
    base: Node
    exponent: float
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ScalarFieldExpr:
    """A parsed, immutable scalar field over (x1, x2, x3)."""

    root: Node
    source: str = field(default="", compare=False)

    def __str__(self):
        return to_source(self.root)


# -- tokenizer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    _ATOM_EXPECTED = ("number", "x1", "x2", "x3", "function", "'('", "'-'")

    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, off = self.peek()
        if kind == "op" and text == op:
            return self.advance()
        raise ExprSyntaxError(f"unexpected {text!r}" if text else "unexpected end of input", off, (f"'{op}'",))

    def parse(self) -> Node:
        kind, _, off = self.peek()
        if kind == "end":
            raise ExprSyntaxError("empty input", off, self._ATOM_EXPECTED)
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing {text!r}", off, ("operator", "end of input"))
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, text, off = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Binary(text, node, rhs, (node.span[0], rhs.span[1]))
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, text, off = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.factor()
                node = Binary(text, node, rhs, (node.span[0], rhs.span[1]))
            else:
                return node

    def factor(self) -> Node:
        kind, text, off = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            inner = self.factor()
            return Unary("neg", inner, (off, inner.span[1]))
        node = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            sign = 1.0
            kind, text, off = self.peek()
            if kind == "op" and text == "-":
                self.advance()
                sign = -1.0
                kind, text, off = self.peek()
            if kind != "number":
                raise ExprSyntaxError(f"unexpected {text!r}" if text else "unexpected end of input", off, ("number",))
            self.advance()
            end = off + len(text)
            return Power(node, sign * float(text), (node.span[0], end))
        return node

    def atom(self) -> Node:
        kind, text, off = self.peek()
        if kind == "number":
            self.advance()
            return Const(float(text), (off, off + len(text)))
        if kind == "ident":
            self.advance()
            if text in COORDS:
                return Coord(int(text[1]), (off, off + len(text)))
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                close = self.expect_op(")")
                return Unary(text, arg, (off, close[2] + 1))
            raise ExprSyntaxError(f"unknown identifier {text!r}", off, self._ATOM_EXPECTED)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            close = self.expect_op(")")
            return _respan(node, (off, close[2] + 1))
        msg = f"unexpected {text!r}" if kind != "end" else "unexpected end of input"
        raise ExprSyntaxError(msg, off, self._ATOM_EXPECTED)


def _respan(node: Node, span: tuple[int, int]) -> Node:
    cls = type(node)
    kwargs = {f: getattr(node, f) for f in node.__dataclass_fields__}
    kwargs["span"] = span
    return cls(**kwargs)


def parse(source: str) -> ScalarFieldExpr:
    """Parse source text into a :class:`ScalarFieldExpr`.

    Raises :class:`ExprSyntaxError` with the character offset and the
    expected-token set on malformed input.
    """
    if not isinstance(source, str):
        raise TypeError("expression source must be a string")
    return ScalarFieldExpr(_Parser(source).parse(), source)


# -- printing -----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "pow": 4, "atom": 5}


def _prec(node: Node) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary) and node.op == "neg":
        return _PREC["neg"]
    if isinstance(node, Power):
        return _PREC["pow"]
    return _PREC["atom"]


def _fmt_number(v: float) -> str:
    return repr(float(v))


def to_source(node) -> str:
    """Render a tree (or ScalarFieldExpr) back to grammar-valid text."""
    if isinstance(node, ScalarFieldExpr):
        node = node.root
    if isinstance(node, Const):
        return _fmt_number(node.value)
    if isinstance(node, Coord):
        return f"x{node.index}"
    if isinstance(node, Unary):
        if node.op == "neg":
            inner = to_source(node.arg)
            if _prec(node.arg) < _PREC["neg"]:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{node.op}({to_source(node.arg)})"
    if isinstance(node, Power):
        base = to_source(node.base)
        if _prec(node.base) < _PREC["atom"]:
            base = f"({base})"
        return f"{base}^{_fmt_number(node.exponent)}"
    if isinstance(node, Binary):
        left = to_source(node.left)
        right = to_source(node.right)
        if _prec(node.left) < _PREC[node.op]:
            left = f"({left})"
        # left-associative grammar: parenthesize a right child of equal precedence
        if _prec(node.right) <= _PREC[node.op]:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation ---------------------------------------------------------------


def as_point(p) -> np.ndarray:
    """Validate and convert a point to a float array of shape (3,)."""
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"point must have 3 coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"point has non-finite coordinates: {arr!r}")
    return arr


def _node_source(expr: ScalarFieldExpr, node: Node) -> str:
    lo, hi = node.span
    if expr.source and 0 <= lo < hi <= len(expr.source):
        return expr.source[lo:hi]
    return to_source(node)


def _eval(expr: ScalarFieldExpr, node: Node, coords):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Coord):
        return coords[node.index - 1]
    try:
        if isinstance(node, Unary):
            arg = _eval(expr, node.arg, coords)
            if node.op == "neg":
                return -arg
            if node.op == "sqrt":
                return jets.sqrt(arg)
            if node.op == "exp":
                return jets.exp(arg)
            if node.op == "log":
                return jets.log(arg)
            if node.op == "sin":
                return jets.sin(arg)
            return jets.cos(arg)
        if isinstance(node, Power):
            return jets.power(_eval(expr, node.base, coords), node.exponent)
        if isinstance(node, Binary):
            left = _eval(expr, node.left, coords)
            right = _eval(expr, node.right, coords)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            return left / right
        raise TypeError(f"not an expression node: {node!r}")
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise EvalDomainError(str(exc), _node_source(expr, node)) from exc


def eval_value(f: ScalarFieldExpr, p) -> float:
    """Evaluate f at p with IEEE double semantics."""
    coords = tuple(float(c) for c in as_point(p))
    return float(_eval(f, f.root, coords))


def eval_jet(f: ScalarFieldExpr, p) -> Jet2:
    """Evaluate f at p together with its exact gradient and Hessian."""
    pt = as_point(p)
    coords = tuple(jets.variable(i, pt) for i in (1, 2, 3))
    out = _eval(f, f.root, coords)
    if not isinstance(out, Jet2):  # constant expression
        out = jets.constant(out)
    if not (np.isfinite(out.value) and np.all(np.isfinite(out.grad)) and np.all(np.isfinite(out.hess))):
        raise EvalDomainError("jet evaluation produced non-finite entries", _node_source(f, f.root))
    return out
