"""Second-order forward-mode differentiation (hyper-dual scalars).

A :class:`Scalar2` carries a value together with its exact gradient and
Hessian with respect to a fixed set of active coordinates. Arithmetic and
the elementary functions below propagate both derivative orders by the
chain rule, so curvature computations that need second derivatives of a
metric never see truncation error.

Every function in this module accepts plain floats as well; in that case
it simply returns a float.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np


class DomainError(ArithmeticError):
    """An elementary operation was evaluated outside its real domain."""

    def __init__(self, op: str, value: float):
        self.op = op
        self.value = value
        super().__init__(f"{op} undefined at {value!r}")


class Scalar2:
    """Value, gradient and Hessian of a scalar function at one point.

    ``hess`` is symmetric bit for bit: every update writes a symmetric
    expression (``a*H_b + b*H_a + outer(g_a, g_b) + outer(g_b, g_a)`` and
    friends), never one triangle at a time.
    """

    __slots__ = ("value", "grad", "hess")
    __array_ufunc__ = None  # numpy scalars defer to our reflected operators

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @classmethod
    def constant(cls, value: float, dim: int) -> "Scalar2":
        return cls(value, np.zeros(dim), np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    def __repr__(self) -> str:
        return f"Scalar2({self.value!r}, grad={self.grad.tolist()}, hess={self.hess.tolist()})"

    # chain rule for a unary function with derivatives d1, d2 at the value
    def _chain(self, value: float, d1: float, d2: float) -> "Scalar2":
        g = self.grad
        return Scalar2(value, d1 * g, d1 * self.hess + d2 * np.outer(g, g))

    def __neg__(self):
        return Scalar2(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Scalar2):
            return Scalar2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        return Scalar2(self.value + other, self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Scalar2):
            return Scalar2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        return Scalar2(self.value - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Scalar2(other - self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Scalar2):
            a, b = self.value, other.value
            ga, gb = self.grad, other.grad
            cross = np.outer(ga, gb)
            return Scalar2(a * b, a * gb + b * ga, a * other.hess + b * self.hess + (cross + cross.T))
        return Scalar2(self.value * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Scalar2):
            return div(self, other)
        if other == 0:
            raise DomainError("/", 0.0)
        return Scalar2(self.value / other, self.grad / other, self.hess / other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)


Number = float | Scalar2


def lift(point: Sequence[float]) -> list[Scalar2]:
    """Seed each coordinate as an independent active variable."""
    x = np.asarray(point, dtype=float)
    if x.ndim != 1:
        raise ValueError("point must be a 1-d vector")
    if not np.all(np.isfinite(x)):
        raise DomainError("lift", float(x[~np.isfinite(x)][0]))
    n = x.shape[0]
    eye = np.eye(n)
    return [Scalar2(x[k], eye[k].copy(), np.zeros((n, n))) for k in range(n)]


def value(x: Number) -> float:
    return x.value if isinstance(x, Scalar2) else float(x)


def div(a: Number, b: Number) -> Number:
    bv = value(b)
    if bv == 0.0:
        raise DomainError("/", bv)
    if not isinstance(b, Scalar2):
        return a / bv
    av = value(a)
    q = av / bv
    # a/b = a * (1/b); derivatives of 1/b: -1/b^2, 2/b^3
    inv = b._chain(1.0 / bv, -1.0 / bv**2, 2.0 / bv**3)
    if isinstance(a, Scalar2):
        out = a * inv
    else:
        out = inv * av
    out.value = q
    return out


def power(a: Number, b: Number) -> Number:
    av = value(a)
    if isinstance(b, Scalar2):
        if av <= 0.0:
            raise DomainError("pow", av)
        v = av**b.value
        if isinstance(a, Scalar2):
            out = exp(b * log(a))
            out.value = v
            return out
        lg = math.log(av)
        return b._chain(v, v * lg, v * lg * lg)
    p = float(b)
    if av < 0.0 and not p.is_integer():
        raise DomainError("pow", av)
    if not isinstance(a, Scalar2):
        if av == 0.0 and p < 0.0:
            raise DomainError("pow", av)
        return av**p
    if p == 0.0:
        return Scalar2.constant(1.0, a.dim)
    if p == 1.0:
        return a
    if av == 0.0 and p < 2.0:
        raise DomainError("pow", av)
    return a._chain(av**p, p * av ** (p - 1.0), p * (p - 1.0) * av ** (p - 2.0))


def sin(x: Number) -> Number:
    if not isinstance(x, Scalar2):
        return math.sin(x)
    s, c = math.sin(x.value), math.cos(x.value)
    return x._chain(s, c, -s)


def cos(x: Number) -> Number:
    if not isinstance(x, Scalar2):
        return math.cos(x)
    s, c = math.sin(x.value), math.cos(x.value)
    return x._chain(c, -s, -c)


def tan(x: Number) -> Number:
    v = value(x)
    if math.cos(v) == 0.0:
        raise DomainError("tan", v)
    if not isinstance(x, Scalar2):
        return math.tan(x)
    t = math.tan(v)
    sec2 = 1.0 + t * t
    return x._chain(t, sec2, 2.0 * t * sec2)


def exp(x: Number) -> Number:
    if not isinstance(x, Scalar2):
        return math.exp(x)
    e = math.exp(x.value)
    return x._chain(e, e, e)


def log(x: Number) -> Number:
    v = value(x)
    if v <= 0.0:
        raise DomainError("log", v)
    if not isinstance(x, Scalar2):
        return math.log(v)
    return x._chain(math.log(v), 1.0 / v, -1.0 / (v * v))


def sqrt(x: Number) -> Number:
    v = value(x)
    if v < 0.0:
        raise DomainError("sqrt", v)
    if not isinstance(x, Scalar2):
        return math.sqrt(v)
    if v == 0.0:
        # derivative blows up unless x is locally constant
        if np.any(x.grad != 0.0) or np.any(x.hess != 0.0):
            raise DomainError("sqrt", v)
        return Scalar2.constant(0.0, x.dim)
    r = math.sqrt(v)
    return x._chain(r, 0.5 / r, -0.25 / (r * v))


def sinh(x: Number) -> Number:
    if not isinstance(x, Scalar2):
        return math.sinh(x)
    s, c = math.sinh(x.value), math.cosh(x.value)
    return x._chain(s, c, s)


def cosh(x: Number) -> Number:
    if not isinstance(x, Scalar2):
        return math.cosh(x)
    s, c = math.sinh(x.value), math.cosh(x.value)
    return x._chain(c, s, c)


def atan2(y: Number, x: Number) -> Number:
    """Two-argument arctangent; derivatives are smooth away from the origin."""
    yv, xv = value(y), value(x)
    if xv == 0.0 and yv == 0.0:
        raise DomainError("atan2", 0.0)
    if not isinstance(y, Scalar2) and not isinstance(x, Scalar2):
        return math.atan2(yv, xv)
    dim = y.dim if isinstance(y, Scalar2) else x.dim
    if not isinstance(y, Scalar2):
        y = Scalar2.constant(yv, dim)
    if not isinstance(x, Scalar2):
        x = Scalar2.constant(xv, dim)
    r2 = xv * xv + yv * yv
    # first partials: d/dy = x/r2, d/dx = -y/r2
    py, px = xv / r2, -yv / r2
    # second partials
    pyy = -2.0 * xv * yv / (r2 * r2)
    pxx = -pyy
    pxy = (yv * yv - xv * xv) / (r2 * r2)
    gy, gx = y.grad, x.grad
    cross = np.outer(gx, gy)
    hess = (
        py * y.hess
        + px * x.hess
        + pyy * np.outer(gy, gy)
        + pxx * np.outer(gx, gx)
        + pxy * (cross + cross.T)
    )
    return Scalar2(math.atan2(yv, xv), py * gy + px * gx, hess)


_UNARY = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "sinh": sinh,
    "cosh": cosh,
}

_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": div,
    "^": power,
    "pow": power,
    "atan2": atan2,
}


def elem(op: str, *args: Number) -> Number:
    """Apply an elementary operation by name (``"+"``, ``"sin"``, ``"atan2"``...)."""
    if op == "-" and len(args) == 1:
        return -args[0]
    if op in _UNARY and len(args) == 1:
        return _UNARY[op](args[0])
    if op in _BINARY and len(args) == 2:
        return _BINARY[op](*args)
    raise ValueError(f"unknown operation {op!r} with {len(args)} argument(s)")


def jet(x: Number, dim: int) -> tuple[float, np.ndarray, np.ndarray]:
    """Return (value, gradient, Hessian) whether ``x`` is active or constant."""
    if isinstance(x, Scalar2):
        return x.value, x.grad, x.hess
    return float(x), np.zeros(dim), np.zeros((dim, dim))
