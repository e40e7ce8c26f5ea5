"""Finite Gaussian series: sums of c * z^n * G^k * A^p * theta^q, G = exp(-z^2/2).

Every symbolic quantity in the reduction is one of these.  Series are
immutable; all operations return new objects and keep the canonical form
(unique keys, no stored zeros).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple

from .surd import Surd


class TermKey(NamedTuple):
    k: int  # power of G
    n: int  # power of zeta
    p: int  # power of the amplitude A
    q: int  # power of theta

    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.k, self.p, self.q, self.n)


@dataclass(frozen=True)
class Truncation:
    """Discard z^n, A^p, theta^q once the exponent reaches the given order."""

    zeta_order: int = 8
    amp_order: int = 6
    theta_order: int = 1

    def __post_init__(self):
        for name in ("zeta_order", "amp_order", "theta_order"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")

    def keeps(self, key: TermKey) -> bool:
        return key.n < self.zeta_order and key.p < self.amp_order and key.q < self.theta_order

    def with_zeta(self, zeta_order: int) -> "Truncation":
        return replace(self, zeta_order=zeta_order)


def _coerce(c) -> Surd:
    if isinstance(c, Surd):
        return c
    if isinstance(c, float):
        raise TypeError("float coefficients are not exact; pass a Fraction or Surd")
    return Surd.rational(c)


class GaussianSeries:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, object] | Iterable[tuple[tuple, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[TermKey, Surd] = {}
        for key, c in items:
            key = TermKey(*key)
            if min(key) < 0:
                raise ValueError(f"negative exponent in {key}")
            c = _coerce(c)
            if key in acc:
                c = acc[key] + c
            if c:
                acc[key] = c
            else:
                acc.pop(key, None)
        self._terms = acc

    @classmethod
    def _raw(cls, terms: dict) -> "GaussianSeries":
        # trusted constructor: TermKey keys, nonzero Surd values
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def term(cls, c=1, *, k: int = 0, n: int = 0, p: int = 0, q: int = 0) -> "GaussianSeries":
        return cls({(k, n, p, q): c})

    @classmethod
    def zero(cls) -> "GaussianSeries":
        return cls._raw({})

    # mapping-like access --------------------------------------------------
    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[TermKey]:
        return iter(sorted(self._terms, key=TermKey.sort_key))

    def __contains__(self, key) -> bool:
        return TermKey(*key) in self._terms

    def __getitem__(self, key) -> Surd:
        return self._terms.get(TermKey(*key), Surd())

    def items(self) -> list[tuple[TermKey, Surd]]:
        return [(key, self._terms[key]) for key in self]

    def keys(self) -> list[TermKey]:
        return list(self)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianSeries):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "GaussianSeries(0)"
        shown = ", ".join(f"{tuple(k)}: {c!r}" for k, c in self.items()[:6])
        more = "" if len(self) <= 6 else f", ... ({len(self)} terms)"
        return f"GaussianSeries({{{shown}{more}}})"

    # arithmetic sugar -----------------------------------------------------
    def __add__(self, other: "GaussianSeries") -> "GaussianSeries":
        return add(self, other)

    def __sub__(self, other: "GaussianSeries") -> "GaussianSeries":
        return add(self, scale(other, -1))

    def __neg__(self) -> "GaussianSeries":
        return scale(self, -1)

    def __mul__(self, other) -> "GaussianSeries":
        if isinstance(other, GaussianSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    # structural helpers ---------------------------------------------------
    def truncate(self, t: Truncation) -> "GaussianSeries":
        return GaussianSeries._raw({key: c for key, c in self._terms.items() if t.keeps(key)})

    def filter(self, pred) -> "GaussianSeries":
        return GaussianSeries._raw({key: c for key, c in self._terms.items() if pred(key)})

    def max_zeta(self) -> int:
        return max((key.n for key in self._terms), default=-1)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self._terms.values())

    # serialization --------------------------------------------------------
    def to_records(self) -> list[dict]:
        out = []
        for key, c in self.items():
            for radicand, q in c.items():
                out.append({
                    "k": key.k, "n": key.n, "p": key.p, "q": key.q,
                    "numerator": q.numerator, "denominator": q.denominator,
                    "radicand": radicand,
                })
        return out

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "GaussianSeries":
        items = []
        for r in records:
            frac = Fraction(int(r["numerator"]), int(r["denominator"]))
            radicand = int(r.get("radicand", 1))
            c = Surd.rational(frac) if radicand == 1 else Surd.sqrt(radicand) * frac
            items.append(((r["k"], r["n"], r["p"], r["q"]), c))
        return cls(items)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_records(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "GaussianSeries":
        return cls.from_records(json.loads(text))


# ring operations -----------------------------------------------------------

def add(a: GaussianSeries, b: GaussianSeries) -> GaussianSeries:
    if len(a._terms) < len(b._terms):
        a, b = b, a
    out = dict(a._terms)
    for key, c in b._terms.items():
        if key in out:
            s = out[key] + c
            if s:
                out[key] = s
            else:
                del out[key]
        else:
            out[key] = c
    return GaussianSeries._raw(out)


def scale(a: GaussianSeries, c) -> GaussianSeries:
    if isinstance(c, Surd):
        if not c:
            return GaussianSeries.zero()
        return GaussianSeries._raw({key: v * c for key, v in a._terms.items()})
    c = Fraction(c)
    if not c:
        return GaussianSeries.zero()
    return GaussianSeries._raw({key: v * c for key, v in a._terms.items()})


def mul(a: GaussianSeries, b: GaussianSeries, t: Truncation | None = None) -> GaussianSeries:
    """Distributed product; Gaussian powers add (G^k * G^l = G^(k+l))."""
    zmax = t.zeta_order if t else math.inf
    pmax = t.amp_order if t else math.inf
    qmax = t.theta_order if t else math.inf
    out: dict[tuple, Surd] = {}
    bterms = list(b._terms.items())
    for (k1, n1, p1, q1), c1 in a._terms.items():
        for (k2, n2, p2, q2), c2 in bterms:
            n = n1 + n2
            p = p1 + p2
            q = q1 + q2
            if n >= zmax or p >= pmax or q >= qmax:
                continue
            key = (k1 + k2, n, p, q)
            prod = c1 * c2
            if key in out:
                out[key] = out[key] + prod
            else:
                out[key] = prod
    return GaussianSeries._raw({TermKey(*key): c for key, c in out.items() if c})


def diff_zeta(a: GaussianSeries) -> GaussianSeries:
    """d/dz of z^n G^k = n z^(n-1) G^k - k z^(n+1) G^k.

    Raises the z-degree by one; callers truncating afterwards need guard order.
    """
    out: dict[tuple, Surd] = {}
    for (k, n, p, q), c in a._terms.items():
        if n:
            key = (k, n - 1, p, q)
            out[key] = out[key] + c * n if key in out else c * n
        if k:
            key = (k, n + 1, p, q)
            out[key] = out[key] - c * k if key in out else c * (-k)
    return GaussianSeries._raw({TermKey(*key): c for key, c in out.items() if c})


def diff_amp(a: GaussianSeries) -> GaussianSeries:
    return GaussianSeries._raw({
        TermKey(k, n, p - 1, q): c * p for (k, n, p, q), c in a._terms.items() if p
    })


def diff_theta(a: GaussianSeries) -> GaussianSeries:
    return GaussianSeries._raw({
        TermKey(k, n, p, q - 1): c * q for (k, n, p, q), c in a._terms.items() if q
    })


def truncate(a: GaussianSeries, t: Truncation) -> GaussianSeries:
    return a.truncate(t)


def evaluate(a: GaussianSeries, zeta: float, A: float, theta: float = 0.0) -> float:
    total = 0.0
    for (k, n, p, q), c in a._terms.items():
        total += float(c) * zeta**n * math.exp(-k * zeta * zeta / 2) * A**p * theta**q
    return total


def evaluate_grid(a: GaussianSeries, zeta, A: float, theta: float = 0.0):
    """Vectorised ``evaluate`` over an array of z values."""
    import numpy as np

    zeta = np.asarray(zeta, dtype=float)
    total = np.zeros_like(zeta)
    for (k, n, p, q), c in a._terms.items():
        total += float(c) * zeta**n * np.exp(-k * zeta**2 / 2) * A**p * theta**q
    return total


# common building blocks
ZETA = GaussianSeries.term(1, n=1)
GAUSS = GaussianSeries.term(1, k=1)
AMP = GaussianSeries.term(1, p=1)
THETA = GaussianSeries.term(1, q=1)
