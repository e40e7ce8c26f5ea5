"""The linear operator S_sigma = d^2/dz^2 + z d/dz + sigma on Gaussian series.

Also: Hermite eigenmodes, the truncated-series inverse ``linv`` of S_1, and the
Gaussian-weighted integral used for amplitude projection.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from .series import GaussianSeries, TermKey, Truncation, add, diff_zeta, mul, scale
from .surd import Surd

MomentRule = Literal["exact", "listing"]

LINV_DEPTH_CAP = 400


class LinvError(ArithmeticError):
    """Raised when linv cannot represent the inverse of a term."""


@dataclass(frozen=True)
class OperatorSigma:
    sigma: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "sigma", Fraction(self.sigma))


@dataclass(frozen=True)
class SpectrumEntry:
    mode_index: int
    eigenvalue: Fraction


def spectrum(op: OperatorSigma, l_max: int) -> list[SpectrumEntry]:
    return [SpectrumEntry(l, op.sigma - 1 - l) for l in range(l_max + 1)]


def apply_S(op: OperatorSigma, v: GaussianSeries, t: Truncation | None = None) -> GaussianSeries:
    vz = diff_zeta(v)
    out = add(add(diff_zeta(vz), mul(GaussianSeries.term(1, n=1), vz)), scale(v, op.sigma))
    return out.truncate(t) if t else out


@lru_cache(maxsize=None)
def _hermite_poly(l: int) -> tuple[int, ...]:
    # probabilists' He_l, coefficient list by power of z
    if l == 0:
        return (1,)
    if l == 1:
        return (0, 1)
    a, b = _hermite_poly(l - 2), _hermite_poly(l - 1)
    out = [0] * (l + 1)
    for i, c in enumerate(b):
        out[i + 1] += c
    for i, c in enumerate(a):
        out[i] -= (l - 1) * c
    return tuple(out)


def hermite_mode(l: int) -> GaussianSeries:
    """He_l(z) * G, an eigenfunction of S_sigma with eigenvalue sigma - 1 - l."""
    if l < 0:
        raise ValueError("mode index must be non-negative")
    return GaussianSeries({(1, n, 0, 0): c for n, c in enumerate(_hermite_poly(l)) if c})


# inverse of S_1 -----------------------------------------------------------------

@lru_cache(maxsize=None)
def _linv_monomial(a: int, b: int, order: int) -> tuple[tuple[int, Fraction], ...]:
    """S_1^{-1}(z^a G^b) as z-coefficients of G^b, dropping z^n for n >= order.

    S_1(z^m G^b) = G^b [m(m-1) z^(m-2) + (m + 1 - b(2m+1)) z^m + b(b-1) z^(m+2)].
    For b = 1 and odd a the recursion runs downward and is exact; otherwise it
    runs upward and terminates at the truncation order.
    """
    out: dict[int, Fraction] = {}

    def acc(terms, factor):
        for n, c in terms:
            out[n] = out.get(n, 0) + factor * c

    if b == 1 and a % 2 == 1:
        if a == 1:
            return ((1, Fraction(-1)),) if order > 1 else ()
        out[a] = Fraction(1)
        acc(_linv_monomial(a - 2, 1, order), -a * (a - 1))
        return tuple((n, c / -a) for n, c in sorted(out.items()) if c and n < order)
    if a + 2 >= order:
        return ()
    if (order - a) // 2 > LINV_DEPTH_CAP:
        raise LinvError(f"linv(z^{a} G^{b}) needs more than {LINV_DEPTH_CAP} recursion levels")
    out[a + 2] = Fraction(1)
    if b > 1:
        acc(_linv_monomial(a + 4, b, order), -b * (b - 1))
    acc(_linv_monomial(a + 2, b, order), -(3 + a - 5 * b - 2 * a * b))
    denom = (a + 2) * (a + 1)
    return tuple((n, c / denom) for n, c in sorted(out.items()) if c)


def linv(rhs: GaussianSeries, t: Truncation) -> GaussianSeries:
    """Truncated-series preimage of ``rhs`` under S_1.

    Output keeps z^n for n < t.zeta_order, so ``apply_S(linv(rhs))`` agrees with
    ``rhs`` below order ``t.zeta_order - 2``.  Pure-kernel terms (b=0 or
    constant * G) never appear in the output.
    """
    out: dict[TermKey, Surd] = {}
    for key, c in rhs.items():
        if key.k == 0:
            raise LinvError(f"term {tuple(key)} has no Gaussian factor; outside the series class")
        try:
            coeffs = _linv_monomial(key.n, key.k, t.zeta_order)
        except RecursionError as exc:
            raise LinvError(f"linv recursion overflow on term {tuple(key)}") from exc
        for n, f in coeffs:
            new = TermKey(key.k, n, key.p, key.q)
            if not (key.p < t.amp_order and key.q < t.theta_order):
                continue
            val = c * f
            out[new] = out[new] + val if new in out else val
    return GaussianSeries._raw({key: c for key, c in out.items() if c})


# Gaussian-weighted integral ---------------------------------------------------------

def _double_factorial_odd(m: int) -> int:
    r = 1
    for i in range(2 * m - 1, 0, -2):
        r *= i
    return r


@lru_cache(maxsize=None)
def moment(n: int, k: int, rule: MomentRule = "exact") -> Surd:
    """(1/sqrt(pi)) * integral of z^n G^k * G over the real line.

    ``exact`` is the closed form (2m-1)!! sqrt(2/(k+1)) / (k+1)^m for n = 2m.
    ``listing`` follows the REDUCE ga(k+1) recursion
    intg(ga(k) x^p) = (p-1)/(k+1) intg(ga(k+1) x^(p-2)), which shifts the weight
    on every step; the reference tables need it.
    """
    if n % 2:
        return Surd()
    m = n // 2
    if rule == "exact":
        return Surd.sqrt(Fraction(2, k + 1)) * Fraction(_double_factorial_odd(m), (k + 1) ** m)
    if rule == "listing":
        denom = 1
        for j in range(1, m + 1):
            denom *= k + j
        return Surd.sqrt(Fraction(2, k + m + 1)) * Fraction(_double_factorial_odd(m), denom)
    raise ValueError(f"unknown moment rule {rule!r}")


def weighted_integral(v: GaussianSeries, rule: MomentRule = "exact") -> GaussianSeries:
    """Integral of v * G over the real line, returned in units of sqrt(pi).

    The result is a polynomial in (A, theta), stored as a series whose keys have
    k = n = 0.  Odd powers of z integrate to zero.
    """
    out: dict[tuple, Surd] = {}
    for (k, n, p, q), c in v.items():
        if n % 2:
            continue
        key = (0, 0, p, q)
        val = c * moment(n, k, rule)
        out[key] = out[key] + val if key in out else val
    return GaussianSeries(out)


def project_amplitude(v: GaussianSeries, rule: MomentRule = "exact") -> GaussianSeries:
    """A = (1/sqrt(pi)) * integral of v exp(-z^2/2) dz, as a polynomial in (A, theta)."""
    return weighted_integral(v, rule)


def lift_gauss(poly: GaussianSeries) -> GaussianSeries:
    """Multiply an (A, theta) polynomial by G."""
    return mul(poly, GaussianSeries.term(1, k=1))


# series-convergence diagnostics for linv(G) -------------------------------------------

@dataclass(frozen=True)
class ConvergenceDiagnostics:
    denominators: list[Fraction]       # c_2n with linv(G) = G * sum z^2n / c_2n
    coefficient_ratios: list[Fraction]  # a_2n / a_(2n-2), n >= 2
    integral_terms: list[Surd]          # (1/c_2n) * integral z^2n G^2, units of sqrt(pi)
    integral_ratios: list[float]        # successive ratios of integral_terms

    def ratio_limit_estimate(self) -> float:
        return self.integral_ratios[-1]


def convergence_diagnostics(n_max: int = 30) -> ConvergenceDiagnostics:
    """Even-coefficient and integrated-term ratios of linv(G) up to z^(2 n_max)."""
    order = 2 * n_max + 1
    coeffs = dict(_linv_monomial(0, 1, order + 2))
    denominators, ratios, terms = [], [], []
    for n in range(1, n_max + 1):
        a = coeffs[2 * n]
        denominators.append(1 / a)
        if n >= 2:
            ratios.append(a / coeffs[2 * n - 2])
        # integral of z^2n G^2 = integral of z^2n G * G
        terms.append(moment(2 * n, 1, "exact") * a)
    int_ratios = [float(terms[i]) / float(terms[i - 1]) for i in range(1, len(terms))]
    return ConvergenceDiagnostics(denominators, ratios, terms, int_ratios)
