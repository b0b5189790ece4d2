"""Forward-mode dual numbers with nestable, numpy-array-valued parts.

A ``Dual`` carries a value part ``a`` and a derivative part ``b``. Either part
may itself be a ``Dual``, which is how second (and higher) derivatives are
obtained: seed an inner level on top of values that already carry an outer
level. The helpers at the bottom follow the one discipline that makes nesting
safe without tags: every input of the function being differentiated is wrapped
at the new level, so quantities from different levels never meet in an
arithmetic operation.

Parts may be plain floats or numpy arrays; all arithmetic broadcasts, so a
single dual evaluation differentiates an expression at a whole batch of
points at once.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Dual", "value", "dual_part", "sin", "cos", "exp", "sqrt", "log",
           "gradient_fn", "partial_fn"]


class Dual:
    """x = a + b*eps with eps**2 = 0."""

    __slots__ = ("a", "b")
    __array_ufunc__ = None  # force numpy to defer to our reflected operators

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def __repr__(self):
        return f"Dual({self.a!r}, {self.b!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a + other.a, self.b + other.b)
        return Dual(self.a + other, self.b)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a - other.a, self.b - other.b)
        return Dual(self.a - other, self.b)

    def __rsub__(self, other):
        return Dual(other - self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a * other.a, self.a * other.b + self.b * other.a)
        return Dual(self.a * other, self.b * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.a
            return Dual(self.a * inv, (self.b - self.a * inv * other.b) * inv)
        return Dual(self.a / other, self.b / other)

    def __rtruediv__(self, other):
        inv = 1.0 / self.a
        return Dual(other * inv, -other * inv * inv * self.b)

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if isinstance(n, Dual):
            raise TypeError("dual-valued exponents are not supported")
        if n == 0:
            return Dual(self.a ** 0, 0.0 * self.b)
        return Dual(self.a ** n, n * self.a ** (n - 1) * self.b)


def value(x):
    """Strip all derivative levels, returning the plain numeric value."""
    while isinstance(x, Dual):
        x = x.a
    return x


def dual_part(x):
    """Derivative part of ``x`` (0.0 if ``x`` never depended on the seed)."""
    return x.b if isinstance(x, Dual) else 0.0


def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.a), cos(x.a) * x.b)
    return np.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.a), -sin(x.a) * x.b)
    return np.cos(x)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.a)
        return Dual(e, e * x.b)
    return np.exp(x)


def sqrt(x):
    if isinstance(x, Dual):
        s = sqrt(x.a)
        return Dual(s, x.b / (2.0 * s))
    return np.sqrt(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(log(x.a), x.b / x.a)
    return np.log(x)


def partial_fn(f, args, i):
    """d f(args) / d args[i], with every input lifted to a fresh level."""
    seeded = [Dual(v, 1.0 if j == i else 0.0) for j, v in enumerate(args)]
    return dual_part(f(seeded))


def gradient_fn(f, args):
    """All first partials of ``f(args)``; one seeded evaluation per slot."""
    return [partial_fn(f, args, i) for i in range(len(args))]
