"""Truncated Taylor (jet) arithmetic over complex numpy arrays.

A :class:`Jet` of order ``K`` stores normalized Taylor coefficients
``c[k] = f^(k)(z) / k!`` along axis 0, so a jet evaluated on a grid of ``N``
points has ``c.shape == (K + 1, N)``.  Elementary operations propagate the
coefficients with the usual Cauchy-product recurrences.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .branch import canonical, principal_pow
from .errors import DomainError

TINY = 1e-300


class JetDomainError(DomainError):
    """Raised by a jet operation; ``index`` locates the first bad element."""

    def __init__(self, message: str, index: tuple | None = None):
        self.index = index
        super().__init__(message)


def _first_bad(mask) -> tuple | None:
    hits = np.argwhere(np.atleast_1d(mask))
    if hits.size == 0:
        return None
    return tuple(int(i) for i in hits[0]) if np.ndim(mask) else ()


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=complex)

    @classmethod
    def variable(cls, z, order: int) -> "Jet":
        z = np.asarray(z, dtype=complex)
        c = np.zeros((order + 1,) + z.shape, dtype=complex)
        c[0] = z
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order: int, shape=()) -> "Jet":
        c = np.zeros((order + 1,) + tuple(shape), dtype=complex)
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @property
    def shape(self) -> tuple:
        return self.c.shape[1:]

    @property
    def value(self):
        return self.c[0]

    def derivative(self, k: int):
        return self.c[k] * factorial(k)

    def derivatives(self) -> list:
        return [self.derivative(k) for k in range(self.order + 1)]

    def diff(self) -> "Jet":
        """Jet of the derivative; one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1).reshape((-1,) + (1,) * len(self.shape))
        return Jet(self.c[1:] * k)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.c[: order + 1])

    # -- coercion --------------------------------------------------------
    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order, np.broadcast_shapes(np.shape(other), self.shape))

    @staticmethod
    def _align(a: "Jet", b: "Jet") -> tuple[np.ndarray, np.ndarray]:
        order = min(a.order, b.order)
        shape = np.broadcast_shapes(a.shape, b.shape)
        ac = np.broadcast_to(a.c[: order + 1], (order + 1,) + shape)
        bc = np.broadcast_to(b.c[: order + 1], (order + 1,) + shape)
        return ac, bc

    # -- arithmetic ------------------------------------------------------
    def __neg__(self) -> "Jet":
        return Jet(-self.c)

    def __add__(self, other) -> "Jet":
        a, b = self._align(self, self._coerce(other))
        return Jet(a + b)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        a, b = self._align(self, self._coerce(other))
        return Jet(a - b)

    def __rsub__(self, other) -> "Jet":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.c * np.asarray(other, dtype=complex))
        a, b = self._align(self, other)
        out = np.zeros_like(a)
        for k in range(a.shape[0]):
            for j in range(k + 1):
                out[k] += a[j] * b[k - j]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=complex)
            bad = np.abs(other) < TINY
            if np.any(bad):
                raise JetDomainError("division by zero", _first_bad(bad))
            return Jet(self.c / other)
        a, b = self._align(self, other)
        bad = np.abs(b[0]) < TINY
        if np.any(bad):
            raise JetDomainError("division by zero", _first_bad(bad))
        q = np.zeros_like(a)
        for k in range(a.shape[0]):
            acc = a[k].copy()
            for j in range(1, k + 1):
                acc -= b[j] * q[k - j]
            q[k] = acc / b[0]
        return Jet(q)

    def __rtruediv__(self, other) -> "Jet":
        return self._coerce(other) / self

    def __pow__(self, e) -> "Jet":
        return self.power(e)

    # -- elementary functions ---------------------------------------------
    def exp(self) -> "Jet":
        a = self.c
        e = np.zeros_like(a)
        e[0] = np.exp(a[0])
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc += j * a[j] * e[k - j]
            e[k] = acc / k
        return Jet(e)

    def log(self) -> "Jet":
        a = self.c
        bad = np.abs(a[0]) < TINY
        if np.any(bad):
            raise JetDomainError("logarithm of zero", _first_bad(bad))
        out = np.zeros_like(a)
        out[0] = np.log(canonical(a[0]))
        for k in range(1, a.shape[0]):
            acc = a[k].copy()
            for j in range(1, k):
                acc -= (k - j) * a[j] * out[k - j] / k
            out[k] = acc / a[0]
        return Jet(out)

    def sin(self) -> "Jet":
        return self._sincos()[0]

    def cos(self) -> "Jet":
        return self._sincos()[1]

    def _sincos(self) -> tuple["Jet", "Jet"]:
        a = self.c
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0] = np.sin(a[0])
        c[0] = np.cos(a[0])
        for k in range(1, a.shape[0]):
            sk = np.zeros_like(a[0])
            ck = np.zeros_like(a[0])
            for j in range(1, k + 1):
                sk += j * a[j] * c[k - j]
                ck -= j * a[j] * s[k - j]
            s[k] = sk / k
            c[k] = ck / k
        return Jet(s), Jet(c)

    def sqrt(self) -> "Jet":
        return self.power(0.5)

    def power(self, e) -> "Jet":
        """Raise to a constant complex exponent on the principal branch.

        Small integer exponents use repeated multiplication so ``z**2`` is
        well defined at ``z = 0``.
        """
        e = complex(e)
        if e.imag == 0 and e.real == int(e.real) and abs(e.real) <= 64:
            n = int(e.real)
            if n == 0:
                return Jet.constant(1.0, self.order, self.shape)
            result = self._int_power(abs(n))
            return 1.0 / result if n < 0 else result
        a = self.c
        zero = np.abs(a[0]) < TINY
        if np.any(zero):
            if self.order == 0 and e.real > 0:
                return Jet(principal_pow(a, e))
            raise JetDomainError("non-integer power of zero", _first_bad(zero))
        y = np.zeros_like(a)
        y[0] = principal_pow(a[0], e)
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc += (e * j - (k - j)) * a[j] * y[k - j]
            y[k] = acc / (k * a[0])
        return Jet(y)

    def _int_power(self, n: int) -> "Jet":
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.shape})"
