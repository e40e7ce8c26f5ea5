"""Exact numbers of the form sum_d q_d * sqrt(d).

Gaussian moments over exp(-k z^2/2) bring in square roots such as sqrt(2/3),
so series coefficients live in a multi-quadratic extension of the rationals
rather than in Q itself.  ``Surd`` keeps them exact: a finite map from
squarefree radicands ``d >= 1`` to ``Fraction`` weights.
"""
from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Union

Number = Union[int, Fraction, "Surd"]


@lru_cache(maxsize=None)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1
    d *= m
    return s, d


class Surd:
    __slots__ = ("_parts", "_hash")

    def __init__(self, parts: dict[int, Fraction] | None = None):
        # caller guarantees squarefree keys and nonzero values
        self._parts = parts or {}
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def rational(cls, q) -> "Surd":
        q = Fraction(q)
        return cls({1: q}) if q else cls()

    @classmethod
    def sqrt(cls, q) -> "Surd":
        """Exact square root of a non-negative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        # sqrt(a/b) = sqrt(a*b)/b
        s, d = squarefree_split(q.numerator * q.denominator)
        return cls({d: Fraction(s, q.denominator)})

    @staticmethod
    def coerce(x: Number) -> "Surd":
        if isinstance(x, Surd):
            return x
        if isinstance(x, (int, Fraction)):
            return Surd.rational(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Surd exactly")

    # inspection -----------------------------------------------------------
    @property
    def parts(self) -> dict[int, Fraction]:
        return dict(self._parts)

    def items(self):
        return sorted(self._parts.items())

    def is_zero(self) -> bool:
        return not self._parts

    def is_rational(self) -> bool:
        return not self._parts or set(self._parts) == {1}

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return self._parts.get(1, Fraction(0))

    def __float__(self) -> float:
        return float(sum(float(q) * math.sqrt(d) for d, q in self._parts.items()))

    def to_decimal(self, digits: int = 40) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            total = Decimal(0)
            for d, q in self._parts.items():
                term = Decimal(q.numerator) / Decimal(q.denominator)
                if d != 1:
                    term *= Decimal(d).sqrt()
                total += term
            return +total

    def sign(self) -> int:
        if not self._parts:
            return 0
        val = self.to_decimal(60)
        return (val > 0) - (val < 0)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: Number) -> "Surd":
        other = Surd.coerce(other)
        if not other._parts:
            return self
        out = dict(self._parts)
        for d, q in other._parts.items():
            v = out.get(d, 0) + q
            if v:
                out[d] = v
            else:
                out.pop(d, None)
        return Surd(out)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd({d: -q for d, q in self._parts.items()})

    def __sub__(self, other: Number) -> "Surd":
        return self + (-Surd.coerce(other))

    def __rsub__(self, other: Number) -> "Surd":
        return Surd.coerce(other) - self

    def __mul__(self, other: Number) -> "Surd":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Surd()
            return Surd({d: q * other for d, q in self._parts.items()})
        other = Surd.coerce(other)
        out: dict[int, Fraction] = {}
        for d1, q1 in self._parts.items():
            for d2, q2 in other._parts.items():
                if d1 == 1:
                    d, q = d2, q1 * q2
                elif d2 == 1:
                    d, q = d1, q1 * q2
                else:
                    g = math.gcd(d1, d2)
                    d, q = (d1 // g) * (d2 // g), q1 * q2 * g
                out[d] = out.get(d, 0) + q
        return Surd({d: q for d, q in out.items() if q})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Surd":
        if isinstance(other, Surd):
            if not other.is_rational():
                raise ValueError("division by an irrational Surd is not supported")
            other = other.as_fraction()
        other = Fraction(other)
        if not other:
            raise ZeroDivisionError("Surd division by zero")
        return Surd({d: q / other for d, q in self._parts.items()})

    # comparison -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Surd.rational(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._parts.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._parts)

    def __repr__(self) -> str:
        if not self._parts:
            return "Surd(0)"
        bits = []
        for d, q in self.items():
            bits.append(str(q) if d == 1 else f"{q}*sqrt({d})")
        return "Surd(" + " + ".join(bits) + ")"


ZERO = Surd()
ONE = Surd.rational(1)
