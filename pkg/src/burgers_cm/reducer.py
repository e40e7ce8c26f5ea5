"""Iterative construction of the centre manifold and the amplitude law.

Start from v = A G, h = 0; repeatedly form the residual of

    dv/dtau' = S_1 v + f(v, theta),   dtheta/dtau' = c theta,

absorb its Gaussian-weighted projection into h and invert the remainder with
``linv``, until the residual vanishes at the working truncation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .operators import (
    MomentRule,
    OperatorSigma,
    apply_S,
    lift_gauss,
    linv,
    project_amplitude,
    weighted_integral,
)
from .series import (
    GaussianSeries,
    Truncation,
    add,
    diff_amp,
    diff_theta,
    diff_zeta,
    mul,
    scale,
)

S1 = OperatorSigma(1)
AG = GaussianSeries.term(1, k=1, p=1)
THETA = GaussianSeries.term(1, q=1)

# Extra z-orders carried by the iteration beyond the reported order.  The
# published coefficients are the converged values of the scheme; at +4 the
# A^3 coefficient still reads 0.0642 instead of 0.0641.
DEFAULT_GUARD = 8
# linv keeps two further orders so that S_1(linv(r)) = r holds at working order
LINV_GUARD = 2


class ReductionError(RuntimeError):
    pass


Nonlinearity = Callable[[GaussianSeries, Truncation], GaussianSeries]


@dataclass(frozen=True)
class SystemDef:
    name: str
    nonlinearity: Nonlinearity
    theta_rate: Fraction = Fraction(0)
    theta_active: bool = False


def burgers_case_a(v: GaussianSeries, t: Truncation) -> GaussianSeries:
    """f = -v v_z + 2 theta v_zz."""
    vz = diff_zeta(v)
    out = scale(mul(v, vz, t), -1)
    if t.theta_order > 1:
        out = add(out, scale(mul(THETA, diff_zeta(vz), t), 2))
    return out.truncate(t)


def burgers_case_b(v: GaussianSeries, t: Truncation) -> GaussianSeries:
    """f = -theta v v_z."""
    if t.theta_order <= 1:
        return GaussianSeries.zero()
    return scale(mul(THETA, mul(v, diff_zeta(v), t), t), -1)


def case_a_system(theta_active: bool, theta_rate=0) -> SystemDef:
    return SystemDef("A2" if theta_active else "A1", burgers_case_a, Fraction(theta_rate), theta_active)


def case_b_system(theta_active: bool, theta_rate=0) -> SystemDef:
    return SystemDef("B2" if theta_active else "B1", burgers_case_b, Fraction(theta_rate), theta_active)


def default_truncation(sys: SystemDef) -> Truncation:
    if not sys.theta_active:
        return Truncation(8, 6, 1)
    return Truncation(8, 6, 2 if sys.nonlinearity is burgers_case_a else 3)


@dataclass
class IterationRecord:
    index: int
    residual_terms: int
    h_correction: GaussianSeries
    rhs: GaussianSeries
    amplitude_defect: GaussianSeries


@dataclass
class ReductionResult:
    system: str
    manifold: GaussianSeries          # truncated at the reported order
    amplitude_law: GaussianSeries     # h(A, theta), keys with k = n = 0
    truncation: Truncation
    working_manifold: GaussianSeries  # as iterated, with guard orders
    working_truncation: Truncation
    iterations: int
    residual_zero: bool
    moment_rule: str
    history: list[IterationRecord] = field(default_factory=list, repr=False)

    def law_coefficient(self, p: int, q: int = 0):
        return self.amplitude_law[(0, 0, p, q)]

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "truncation": vars_of(self.truncation),
            "working_truncation": vars_of(self.working_truncation),
            "iterations": self.iterations,
            "residual_zero": self.residual_zero,
            "moment_rule": self.moment_rule,
            "amplitude_law": self.amplitude_law.to_records(),
            "manifold": self.manifold.to_records(),
            "working_manifold": self.working_manifold.to_records(),
        }


def vars_of(t: Truncation) -> dict:
    return {"zeta_order": t.zeta_order, "amp_order": t.amp_order, "theta_order": t.theta_order}


def residual(sys: SystemDef, v: GaussianSeries, h: GaussianSeries, t: Truncation) -> GaussianSeries:
    """v_A h + v_theta c theta - S_1 v - f(v, theta), truncated at ``t``."""
    out = mul(diff_amp(v), h, t)
    if sys.theta_rate and sys.theta_active:
        out = add(out, scale(mul(THETA, diff_theta(v), t), sys.theta_rate))
    out = add(out, scale(apply_S(S1, v), -1))
    out = add(out, scale(sys.nonlinearity(v, t), -1))
    return out.truncate(t)


def solvability_split(r: GaussianSeries, rule: MomentRule = "exact") -> tuple[GaussianSeries, GaussianSeries]:
    """Return (h correction, r + h' G) with the second part of zero weighted integral."""
    h_corr = scale(weighted_integral(r, rule), -1)
    return h_corr, add(r, lift_gauss(h_corr))


def reduce(
    sys: SystemDef,
    t: Truncation | None = None,
    max_iter: int = 20,
    *,
    guard: int = DEFAULT_GUARD,
    moment_rule: MomentRule = "listing",
    keep_history: bool = True,
) -> ReductionResult:
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if sys.theta_rate and sys.theta_active:
        # the update inverts S_1 only; a nonzero rate needs (S_1 - c q)^-1 on theta^q blocks
        raise NotImplementedError("nonzero theta rate is not supported; reduce with c = 0")
    t = t or default_truncation(sys)
    if not sys.theta_active and t.theta_order != 1:
        t = Truncation(t.zeta_order, t.amp_order, 1)
    work = t.with_zeta(t.zeta_order + guard)
    store = work.with_zeta(work.zeta_order + LINV_GUARD)

    v = AG
    h = GaussianSeries.zero()
    history: list[IterationRecord] = []
    for it in range(1, max_iter + 1):
        r = residual(sys, v, h, work)
        if r.is_zero():
            return _result(sys, t, work, v, h, it - 1, moment_rule, history)
        h_corr, rhs = solvability_split(r, moment_rule)
        vd = linv(rhs, store)
        v = add(v, add(vd, scale(lift_gauss(project_amplitude(vd, moment_rule)), -1)))
        h = add(h, h_corr)
        defect = add(project_amplitude(v, moment_rule), scale(GaussianSeries.term(1, p=1), -1))
        if keep_history:
            history.append(IterationRecord(it, len(r), h_corr, rhs, defect))
    r = residual(sys, v, h, work)
    if r.is_zero():
        return _result(sys, t, work, v, h, max_iter, moment_rule, history)
    surviving = ", ".join(f"{tuple(k)}" for k in r.keys()[:8])
    raise ReductionError(
        f"{sys.name}: residual not zero after {max_iter} iterations "
        f"({len(r)} terms survive, e.g. {surviving})"
    )


def _result(sys, t, work, v, h, iterations, rule, history) -> ReductionResult:
    return ReductionResult(
        system=sys.name,
        manifold=v.truncate(t),
        amplitude_law=h,
        truncation=t,
        working_manifold=v,
        working_truncation=work,
        iterations=iterations,
        residual_zero=True,
        moment_rule=rule,
        history=history,
    )


def linv_roundtrip_defects(res: ReductionResult) -> list[GaussianSeries]:
    """S_1(linv(rhs)) - rhs at working order, for every recorded right-hand side."""
    work = res.working_truncation
    store = work.with_zeta(work.zeta_order + LINV_GUARD)
    out = []
    for rec in res.history:
        back = apply_S(S1, linv(rec.rhs, store))
        out.append(add(back, scale(rec.rhs, -1)).truncate(work))
    return out
