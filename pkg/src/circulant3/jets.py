"""Second-order forward-mode jets in three variables.

A :class:`Jet2` carries the value, gradient and Hessian of a scalar field
at a point, i.e. its truncated second-order Taylor expansion. Arithmetic
on jets propagates derivatives exactly (to rounding); no finite
differencing is involved anywhere.

The scalar (value) channel of every operation performs the *same*
floating-point primitives as a plain-number evaluation would, so jet
evaluation and plain evaluation of one expression agree bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

Scalar = (int, float)


def _pow_value(v: float, r: float) -> float:
    # Integer exponents go through float pow (valid for negative bases);
    # real exponents require a positive base and use exp(r*log(v)).
    if float(r).is_integer():
        return v ** int(r)
    return math.exp(r * math.log(v))


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and symmetric Hessian of a scalar field at a point."""

    value: float
    grad: np.ndarray = field(repr=False)
    hess: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        g = np.asarray(self.grad, dtype=float)
        h = np.asarray(self.hess, dtype=float)
        if g.shape != (3,) or h.shape != (3, 3):
            raise ValueError("Jet2 needs a 3-gradient and a 3x3 Hessian")
        object.__setattr__(self, "grad", g)
        # exact when h is already symmetric: (x + x)/2 == x
        object.__setattr__(self, "hess", (h + h.T) / 2.0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        if isinstance(other, Scalar):
            return Jet2(self.value + other, self.grad, self.hess)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        if isinstance(other, Scalar):
            return Jet2(self.value - other, self.grad, self.hess)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Scalar):
            return Jet2(other - self.value, -self.grad, -self.hess)
        return NotImplemented

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            return Jet2(
                self.value * other.value,
                self.value * other.grad + other.value * self.grad,
                self.value * other.hess
                + other.value * self.hess
                + np.outer(self.grad, other.grad)
                + np.outer(other.grad, self.grad),
            )
        if isinstance(other, Scalar):
            return Jet2(self.value * other, self.grad * other, self.hess * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            v = other.value
            # float division raises ZeroDivisionError on its own for v == 0
            val = self.value / v
            grad = (self.grad * v - self.value * other.grad) / (v * v)
            hess = (
                self.hess / v
                - self.value * other.hess / (v * v)
                - (np.outer(self.grad, other.grad) + np.outer(other.grad, self.grad)) / (v * v)
                + 2.0 * self.value * np.outer(other.grad, other.grad) / (v * v * v)
            )
            return Jet2(val, grad, hess)
        if isinstance(other, Scalar):
            return Jet2(self.value / other, self.grad / other, self.hess / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Scalar):
            v = self.value
            val = other / v
            return _lift(self, val, -other / (v * v), 2.0 * other / (v * v * v))
        return NotImplemented

    def __pow__(self, r):
        if not isinstance(r, Scalar):
            return NotImplemented
        r = float(r)
        v = self.value
        if r.is_integer():
            n = int(r)
            val = v ** n  # ZeroDivisionError for v == 0, n < 0
            if v == 0.0:
                d1 = 1.0 if n == 1 else 0.0
                d2 = 2.0 if n == 2 else 0.0
            else:
                d1 = n * v ** (n - 1)
                d2 = n * (n - 1) * v ** (n - 2)
            return _lift(self, val, d1, d2)
        # real exponent: compose exp(r * log(.)) so the value channel matches
        # _pow_value exactly
        return exp(r * log(self))


def constant(c: float) -> Jet2:
    """Jet of a constant field."""
    return Jet2(float(c), np.zeros(3), np.zeros((3, 3)))


def variable(i: int, p) -> Jet2:
    """Jet of the i-th coordinate function (i in 1..3) at point p."""
    if i not in (1, 2, 3):
        raise ValueError(f"coordinate index {i} out of range 1..3")
    p = np.asarray(p, dtype=float)
    grad = np.zeros(3)
    grad[i - 1] = 1.0
    return Jet2(p[i - 1], grad, np.zeros((3, 3)))


def _lift(j: Jet2, f0: float, f1: float, f2: float) -> Jet2:
    """Compose a scalar function (value f0, derivatives f1, f2 at j.value) with j."""
    return Jet2(f0, f1 * j.grad, f1 * j.hess + f2 * np.outer(j.grad, j.grad))


# -- scalar functions usable on floats and jets alike ------------------------


def sqrt(x):
    if isinstance(x, Jet2):
        v = x.value
        if v <= 0.0:
            raise ValueError(f"sqrt of a jet requires a positive value, got {v!r}")
        s = math.sqrt(v)
        return _lift(x, s, 0.5 / s, -0.25 / (s * v))
    return math.sqrt(x)


def exp(x):
    if isinstance(x, Jet2):
        e = math.exp(x.value)
        return _lift(x, e, e, e)
    return math.exp(x)


def log(x):
    if isinstance(x, Jet2):
        v = x.value
        if v <= 0.0:
            raise ValueError(f"log of a jet requires a positive value, got {v!r}")
        return _lift(x, math.log(v), 1.0 / v, -1.0 / (v * v))
    return math.log(x)


def sin(x):
    if isinstance(x, Jet2):
        s, c = math.sin(x.value), math.cos(x.value)
        return _lift(x, s, c, -s)
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet2):
        s, c = math.sin(x.value), math.cos(x.value)
        return _lift(x, c, -s, -c)
    return math.cos(x)


def power(x, r: float):
    """x**r for a float or jet x; integer r admits non-positive bases."""
    if isinstance(x, Jet2):
        return x ** r
    return _pow_value(x, r)
