"""Exact arithmetic in cyclotomic fields Q(zeta_k).

An element is a rational polynomial in ``z`` of degree below ``phi(k)``,
reduced modulo the k-th cyclotomic polynomial.  Elements that reduce to a
rational number collapse to :class:`fractions.Fraction`, so the base field
of the rest of the package is "Fraction or Cyclotomic".
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import Sequence, Union

Scalar = Union[int, Fraction, "Cyclotomic"]


# -- dense rational polynomials, lowest degree first -------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        quot[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        _trim(a)
    return _trim(quot), a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(k: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_k, lowest degree first."""
    if k < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [Fraction(-1)] + [Fraction(0)] * (k - 1) + [Fraction(1)]
    for d in range(1, k):
        if k % d == 0:
            num, rem = _poly_divmod(num, cyclotomic_polynomial(d))
            assert not rem
    return tuple(int(c) for c in num)


def euler_phi(k: int) -> int:
    return len(cyclotomic_polynomial(k)) - 1


def _reduce(p: Sequence, k: int) -> list:
    _, rem = _poly_divmod(p, cyclotomic_polynomial(k))
    return rem


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Cyclotomic:
    """Element of Q(zeta_k) stored as reduced coefficients of powers of zeta_k."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence, order: int):
        self.order = int(order)
        red = _reduce([Fraction(c) for c in coeffs], self.order)
        deg = euler_phi(self.order)
        self.coeffs = tuple(red + [Fraction(0)] * (deg - len(red)))

    @classmethod
    def make(cls, coeffs: Sequence, order: int) -> Scalar:
        """Build an element, collapsing to a Fraction when it is rational."""
        return cls(coeffs, order)._collapse()

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> Scalar:
        power %= order
        return cls.make([0] * power + [1], order)

    def _collapse(self) -> Scalar:
        if all(c == 0 for c in self.coeffs[1:]):
            return self.coeffs[0] if self.coeffs else Fraction(0)
        return self

    def embed(self, order: int) -> "Cyclotomic":
        """Re-express in Q(zeta_order); ``self.order`` must divide ``order``."""
        if order % self.order:
            raise ValueError(f"Q(zeta_{self.order}) does not embed in Q(zeta_{order})")
        step = order // self.order
        lifted = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            lifted[i * step] = c
        return Cyclotomic(lifted, order)

    @staticmethod
    def _coerce(x: Scalar, order: int) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x.embed(order)
        if isinstance(x, (int, Rational)):
            return Cyclotomic([Fraction(x)], order)
        raise TypeError(f"cannot coerce {type(x).__name__} into a cyclotomic field")

    def _common(self, other) -> tuple["Cyclotomic", "Cyclotomic"] | None:
        if isinstance(other, Cyclotomic):
            order = _lcm(self.order, other.order)
            return self.embed(order), other.embed(order)
        if isinstance(other, (int, Rational)):
            return self, Cyclotomic([Fraction(other)], self.order)
        return None

    def __add__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic([x + y for x, y in zip(a.coeffs, b.coeffs)], a.order)._collapse()

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic([x - y for x, y in zip(a.coeffs, b.coeffs)], a.order)._collapse()

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic(_poly_mul(a.coeffs, b.coeffs), a.order)._collapse()

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        # extended Euclid: s*self + t*Phi = 1
        r0, r1 = list(cyclotomic_polynomial(self.order)), _trim(list(self.coeffs))
        if not r1:
            raise ZeroDivisionError("inverse of zero")
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            qs = _poly_mul(q, s1)
            width = max(len(s0), len(qs))
            s_next = [
                (s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)
                for i in range(width)
            ]
            s0, s1 = s1, _trim(s_next)
        # r1 is a nonzero constant since Phi is irreducible
        c = r1[0]
        return Cyclotomic([x / c for x in s1], self.order)._collapse()

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        return pair[0].coeffs == pair[1].coeffs

    __hash__ = None  # type: ignore[assignment]

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(complex(c) * z**i for i, c in enumerate(self.coeffs))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self) -> str:
        return f"Cyclotomic({[str(c) for c in self.coeffs]}, order={self.order})"

    def __str__(self) -> str:
        return format_scalar(self)


def to_complex(x: Scalar) -> complex:
    """Numeric embedding at the principal root of unity."""
    return complex(x)


def format_scalar(x: Scalar) -> str:
    if isinstance(x, Cyclotomic):
        return "poly(z; " + ",".join(str(c) for c in x.coeffs) + f")@{x.order}"
    return str(Fraction(x))


_POLY_RE = re.compile(r"^poly\(z;\s*([^)]*)\)@(\d+)$")


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`."""
    text = text.strip()
    m = _POLY_RE.match(text)
    if m:
        coeffs = [Fraction(c.strip()) for c in m.group(1).split(",") if c.strip()]
        return Cyclotomic.make(coeffs, int(m.group(2)))
    return Fraction(text)
