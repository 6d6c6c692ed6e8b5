"""A small closed-form expression language.

Grammar (loosest to tightest binding)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?          # right associative
    primary := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

Names are declared variables, the constants ``pi`` and ``e``, or one of the
functions ``sin cos tan exp log sqrt sinh cosh`` (one argument each).
Whitespace is ignored. ``-x^2`` parses as ``-(x^2)``.

Trees are immutable and evaluate over floats or :class:`~warpcurv.adscalar.Scalar2`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import adscalar as ad

FUNCTIONS = {
    "sin": ad.sin,
    "cos": ad.cos,
    "tan": ad.tan,
    "exp": ad.exp,
    "log": ad.log,
    "sqrt": ad.sqrt,
    "sinh": ad.sinh,
    "cosh": ad.cosh,
}
CONSTANTS = {"pi": math.pi, "e": math.e}


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at byte {offset}")


class UnknownIdentifier(ExprError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at byte {offset}")


class ExprEvalError(ExprError):
    """A domain error raised while evaluating a tree, with source location."""

    def __init__(self, op: str, value: float, offset: int, source: str = ""):
        self.op = op
        self.value = value
        self.offset = offset
        self.source = source
        where = f" in {source!r}" if source else ""
        super().__init__(f"{op} undefined at {value!r} (byte {offset}{where})")


# ---------------------------------------------------------------- tree nodes


@dataclass(frozen=True)
class Num:
    value: float
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Expr"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"
    offset: int = field(default=0, compare=False)


Expr = Num | Var | Const | Neg | BinOp | Call


# ------------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", _byte(text, bad), text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte(text, start)))
        pos = m.end()
    tokens.append(("end", "", _byte(text, len(text))))
    return tokens


def _byte(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.vars = set(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, off = self.take()
        if val != value or kind == "end":
            found = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", off, self.text)

    def parse(self) -> Expr:
        tree = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", off, self.text)
        return tree

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, off = self.take()
            left = BinOp(op, left, self.term(), off)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, off = self.take()
            left = BinOp(op, left, self.unary(), off)
        return left

    def unary(self) -> Expr:
        kind, val, off = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary(), off)
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        kind, val, off = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return BinOp("^", base, self.unary(), off)
        return base

    def primary(self) -> Expr:
        kind, val, off = self.take()
        if kind == "num":
            return Num(float(val), off)
        if kind == "name":
            if self.peek()[1] == "(" and val not in self.vars:
                if val not in FUNCTIONS:
                    raise UnknownIdentifier(val, off)
                self.take()
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != 1:
                    raise ExprSyntaxError(f"{val} takes 1 argument, got {len(args)}", off, self.text)
                return Call(val, args[0], off)
            if val in self.vars:
                return Var(val, off)
            if val in CONSTANTS:
                return Const(val, off)
            raise UnknownIdentifier(val, off)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {found}", off, self.text)


def parse(text: str, variables: Sequence[str] = ()) -> Expr:
    """Parse ``text`` into a tree whose free variables lie in ``variables``."""
    if not isinstance(text, str) or not text.strip():
        raise ExprSyntaxError("empty expression", 0, text if isinstance(text, str) else "")
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------- evaluation


def evaluate(expr: Expr, env: Mapping[str, ad.Number], source: str = "") -> ad.Number:
    """Evaluate over floats or Scalar2 values bound in ``env``."""
    try:
        return _eval(expr, env)
    except _Located as exc:
        raise ExprEvalError(exc.op, exc.value, exc.offset, source) from None


class _Located(Exception):
    def __init__(self, op, value, offset):
        self.op, self.value, self.offset = op, value, offset


def _eval(node: Expr, env):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, BinOp):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        try:
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                return ad.div(a, b)
            return ad.power(a, b)
        except ad.DomainError as exc:
            raise _Located(exc.op, exc.value, node.offset) from None
    if isinstance(node, Call):
        a = _eval(node.arg, env)
        try:
            return FUNCTIONS[node.func](a)
        except ad.DomainError as exc:
            raise _Located(exc.op, exc.value, node.offset) from None
    raise TypeError(f"not an expression node: {node!r}")


def free_vars(expr: Expr) -> set[str]:
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, Neg):
        return free_vars(expr.arg)
    if isinstance(expr, BinOp):
        return free_vars(expr.left) | free_vars(expr.right)
    if isinstance(expr, Call):
        return free_vars(expr.arg)
    return set()


def to_text(expr: Expr) -> str:
    """Fully parenthesized source text that parses back to the same tree."""
    if isinstance(expr, Num):
        return repr(float(expr.value))
    if isinstance(expr, (Var, Const)):
        return expr.name
    if isinstance(expr, Neg):
        return f"(-{to_text(expr.arg)})"
    if isinstance(expr, BinOp):
        return f"({to_text(expr.left)} {expr.op} {to_text(expr.right)})"
    if isinstance(expr, Call):
        return f"{expr.func}({to_text(expr.arg)})"
    raise TypeError(f"not an expression node: {expr!r}")


# ------------------------------------------------------ symbolic derivative
# Used to build induced metrics of builtin immersions exactly (a metric
# needs two more derivatives than the map it is pulled back through).

_ZERO = Num(0.0)
_ONE = Num(1.0)


def _is(node: Expr, v: float) -> bool:
    return isinstance(node, Num) and node.value == v


def _add(a, b):
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return Neg(b)
    return BinOp("-", a, b)


def _mul(a, b):
    if _is(a, 0.0) or _is(b, 0.0):
        return _ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    return BinOp("*", a, b)


def _div(a, b):
    if _is(a, 0.0):
        return _ZERO
    if _is(b, 1.0):
        return a
    return BinOp("/", a, b)


def _neg(a):
    return _ZERO if _is(a, 0.0) else Neg(a)


def diff(expr: Expr, var: str) -> Expr:
    """Derivative of ``expr`` with respect to ``var`` as a new tree."""
    if isinstance(expr, (Num, Const)):
        return _ZERO
    if isinstance(expr, Var):
        return _ONE if expr.name == var else _ZERO
    if isinstance(expr, Neg):
        return _neg(diff(expr.arg, var))
    if isinstance(expr, BinOp):
        u, v = expr.left, expr.right
        du, dv = diff(u, var), diff(v, var)
        if expr.op == "+":
            return _add(du, dv)
        if expr.op == "-":
            return _sub(du, dv)
        if expr.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if expr.op == "/":
            return _div(_sub(_mul(du, v), _mul(u, dv)), BinOp("^", v, Num(2.0)))
        if var not in free_vars(v):
            # u^c -> c u^(c-1) u'
            lower = BinOp("^", u, BinOp("-", v, _ONE)) if not isinstance(v, Num) else BinOp("^", u, Num(v.value - 1.0))
            return _mul(_mul(v, lower), du)
        # u^v (v' log u + v u'/u)
        return _mul(expr, _add(_mul(dv, Call("log", u)), _div(_mul(v, du), u)))
    if isinstance(expr, Call):
        u = expr.arg
        du = diff(u, var)
        if _is(du, 0.0):
            return _ZERO
        f = expr.func
        if f == "sin":
            outer = Call("cos", u)
        elif f == "cos":
            outer = Neg(Call("sin", u))
        elif f == "tan":
            outer = BinOp("+", _ONE, BinOp("^", Call("tan", u), Num(2.0)))
        elif f == "exp":
            outer = expr
        elif f == "log":
            return _div(du, u)
        elif f == "sqrt":
            return _div(du, BinOp("*", Num(2.0), expr))
        elif f == "sinh":
            outer = Call("cosh", u)
        elif f == "cosh":
            outer = Call("sinh", u)
        else:
            raise ExprError(f"no derivative rule for {f}")
        return _mul(outer, du)
    raise TypeError(f"not an expression node: {expr!r}")


def compile_expr(text: str, variables: Sequence[str]):
    """Parse once and return a callable taking coordinate values in order."""
    tree = parse(text, variables)
    names = list(variables)

    def fn(coords):
        return evaluate(tree, dict(zip(names, coords)), source=text)

    fn.tree = tree
    fn.source = text
    return fn
