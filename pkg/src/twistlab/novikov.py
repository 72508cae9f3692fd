"""Finite-support elements of the Novikov field.

A :class:`NovikovScalar` is a finite sum ``sum a_i q^{w_i}`` with rational
exponents and exact coefficients (``Fraction`` or :class:`Cyclotomic`).
Inverses are infinite series in general; :func:`invert_truncated` cuts them
off at a caller-supplied exponent.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .cyclotomic import Cyclotomic, Scalar, format_scalar, parse_scalar


def _is_base(x) -> bool:
    return isinstance(x, (int, Rational, Cyclotomic))


class NovikovScalar:
    """Immutable normalized term list: exponents strictly increasing, no zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict[Fraction, Scalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coeff in items:
            e = Fraction(exp)
            acc[e] = acc.get(e, Fraction(0)) + coeff
        self.terms: tuple[tuple[Fraction, Scalar], ...] = tuple(
            (e, c) for e, c in sorted(acc.items()) if c != 0
        )

    @classmethod
    def _raw(cls, terms: tuple) -> "NovikovScalar":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, coeff: Scalar, exponent=0) -> "NovikovScalar":
        return cls([(exponent, coeff)])

    @classmethod
    def coerce(cls, x) -> "NovikovScalar":
        if isinstance(x, NovikovScalar):
            return x
        if _is_base(x):
            return cls.monomial(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} into the Novikov field")

    # -- ring structure --------------------------------------------------

    def __add__(self, other):
        try:
            other = NovikovScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return NovikovScalar(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return NovikovScalar._raw(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        try:
            other = NovikovScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_base(other):
            if other == 0:
                return NovikovScalar()
            return NovikovScalar._raw(tuple((e, c * other) for e, c in self.terms))
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        return NovikovScalar(
            (ea + eb, ca * cb) for ea, ca in self.terms for eb, cb in other.terms
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need invert_truncated")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            other = NovikovScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if len(self.terms) != len(other.terms):
            return False
        return all(ea == eb and ca == cb for (ea, ca), (eb, cb) in zip(self.terms, other.terms))

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- inspection ------------------------------------------------------

    def valuation(self) -> Fraction | float:
        """Smallest exponent with a nonzero coefficient; ``math.inf`` for zero."""
        return self.terms[0][0] if self.terms else math.inf

    def leading(self) -> tuple[Fraction, Scalar]:
        if not self.terms:
            raise ValueError("zero has no leading term")
        return self.terms[0]

    def coefficient(self, exponent) -> Scalar:
        e = Fraction(exponent)
        for ee, c in self.terms:
            if ee == e:
                return c
        return Fraction(0)

    def support(self) -> tuple[Fraction, ...]:
        return tuple(e for e, _ in self.terms)

    def truncate(self, omega_max) -> "NovikovScalar":
        """Drop every term of exponent strictly above ``omega_max``."""
        bound = Fraction(omega_max)
        return NovikovScalar._raw(tuple(t for t in self.terms if t[0] <= bound))

    def __repr__(self) -> str:
        return f"NovikovScalar({format_novikov(self)!r})"

    def __str__(self) -> str:
        return format_novikov(self)


ZERO = NovikovScalar()
ONE = NovikovScalar.monomial(Fraction(1))


def q(exponent=1) -> NovikovScalar:
    """The monomial q^exponent."""
    return NovikovScalar.monomial(Fraction(1), exponent)


def valuation(a: NovikovScalar) -> Fraction | float:
    return NovikovScalar.coerce(a).valuation()


@dataclass(frozen=True)
class TruncationPolicy:
    omega_max: Fraction

    def __post_init__(self):
        object.__setattr__(self, "omega_max", Fraction(self.omega_max))
        if self.omega_max <= 0:
            raise ValueError("omega_max must be positive")


def arith(a, b, op: str) -> NovikovScalar:
    a = NovikovScalar.coerce(a)
    if op == "neg":
        return -a
    b = NovikovScalar.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def invert_truncated(a, policy: TruncationPolicy) -> NovikovScalar:
    """Inverse of ``a`` with ``a * result - 1`` of valuation above ``policy.omega_max``.

    Written as ``c q^v (1 + r)`` with ``val(r) > 0``, the inverse is
    ``c^-1 q^-v sum (-r)^i``; the geometric series is cut once its terms can
    no longer contribute at or below ``omega_max``.
    """
    a = NovikovScalar.coerce(a)
    if not a:
        raise ZeroDivisionError("inverse of zero in the Novikov field")
    v, c = a.leading()
    c_inv = 1 / c if not isinstance(c, Cyclotomic) else c.inverse()
    lead_inv = NovikovScalar.monomial(c_inv, -v)
    tail = NovikovScalar._raw(tuple((e - v, cc * c_inv) for e, cc in a.terms[1:]))
    if not tail:
        return lead_inv
    # a * b = (1 + tail) * series, so the series is needed up to omega_max itself
    u = -tail
    series = ONE
    power = ONE
    while True:
        power = (power * u).truncate(policy.omega_max)
        if not power:
            break
        series = series + power
    return lead_inv * series


# -- textual form ------------------------------------------------------------

def format_novikov(a: NovikovScalar) -> str:
    if not a.terms:
        return "0"
    return " + ".join(f"{format_scalar(c)}*q^({e})" for e, c in a.terms)


_TERM_RE = re.compile(r"^(?P<coeff>.+)\*q\^\((?P<exp>[-+]?\d+(?:/\d+)?)\)$")


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0 and i > 0 and text[i - 1] == " ":
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_novikov(text: str) -> NovikovScalar:
    """Parse the ``coeff*q^(p/q) + ...`` form; a bare coefficient means a q^0 term."""
    text = text.strip()
    if text in ("", "0"):
        return ZERO
    terms = []
    for chunk in _split_top_level(text):
        m = _TERM_RE.match(chunk)
        if m:
            terms.append((Fraction(m.group("exp")), parse_scalar(m.group("coeff"))))
        else:
            terms.append((Fraction(0), parse_scalar(chunk)))
    return NovikovScalar(terms)
