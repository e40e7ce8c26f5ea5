"""Case configuration, back-transformation to u(x, t), and amplitude-law integration.

Diffusivity is Delta(t) = 2 (gamma + delta t^r).  With gamma != 0 the similarity
scaling is fixed by gamma (case A); with gamma = 0 it follows the decay of the
diffusivity (case B).  The digit marks one critical mode (r < 0) or two
(r ~ 0, theta kept as a second slow variable).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Literal

import numpy as np

from .reducer import ReductionResult, SystemDef, case_a_system, case_b_system
from .series import GaussianSeries, evaluate_grid

CaseTag = Literal["A1", "A2", "B1", "B2"]
ThetaSign = Literal["printed", "matched"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CaseConfig:
    gamma: float
    delta: float
    r: float
    case_tag: CaseTag
    alpha: float
    beta: float
    c_const: float
    sigma: Fraction
    theta_rate: Fraction      # c in dtheta/dtau' = c theta
    zeta_scale: float         # z = zeta_scale * x * t^(-beta)
    tau_rate: float           # tau' = tau_rate * log t
    theta_coeff: float        # theta(t) = theta_coeff * t^theta_exponent
    theta_exponent: float
    r_threshold: float = 1e-3
    theta_sign: ThetaSign = "printed"

    @property
    def two_mode(self) -> bool:
        return self.case_tag.endswith("2")

    def diffusivity(self, t):
        """Half of Delta(t): the coefficient multiplying u_xx."""
        return self.gamma + self.delta * np.power(t, self.r)

    def theta(self, t):
        return self.theta_coeff * np.power(t, self.theta_exponent)

    def zeta(self, x, t):
        return self.zeta_scale * np.asarray(x) * np.power(t, -self.beta)

    def u_scale(self, t):
        return self.c_const * np.power(t, -self.alpha)

    def transient_exponent(self) -> float:
        # slowest stable mode decays like exp(-tau') = t^(-tau_rate)
        return self.tau_rate

    def system(self, use_theta_rate: bool = False) -> SystemDef:
        rate = self.theta_rate if use_theta_rate else 0
        if self.case_tag.startswith("A"):
            return case_a_system(self.two_mode, rate)
        return case_b_system(self.two_mode, rate)

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma, "delta": self.delta, "r": self.r,
            "case_tag": self.case_tag, "alpha": self.alpha, "beta": self.beta,
            "C": self.c_const, "sigma": str(self.sigma),
            "theta_rate": str(self.theta_rate), "zeta_scale": self.zeta_scale,
            "tau_rate": self.tau_rate, "theta_coeff": self.theta_coeff,
            "theta_exponent": self.theta_exponent, "r_threshold": self.r_threshold,
            "theta_sign": self.theta_sign,
        }


def _exact(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10**9)


def configure(
    gamma: float,
    delta: float,
    r: float,
    r_critical_threshold: float = 1e-3,
    theta_sign: ThetaSign = "printed",
) -> CaseConfig:
    if not all(map(math.isfinite, (gamma, delta, r))):
        raise ConfigError("parameters must be finite")
    if gamma < 0:
        raise ConfigError(f"gamma must be non-negative, got {gamma}")
    if delta <= 0:
        raise ConfigError(f"delta must be positive, got {delta}")
    if r > 0:
        raise ConfigError(f"r must be non-positive (r > 0 is the centre-unstable case), got {r}")
    if theta_sign not in ("printed", "matched"):
        raise ConfigError(f"theta_sign must be 'printed' or 'matched', got {theta_sign!r}")
    critical = abs(r) < r_critical_threshold
    if gamma != 0:
        return CaseConfig(
            gamma=gamma, delta=delta, r=r,
            case_tag="A2" if critical else "A1",
            alpha=0.5, beta=0.5, c_const=math.sqrt(gamma / 2), sigma=Fraction(1),
            theta_rate=2 * _exact(r),
            zeta_scale=math.sqrt(1 / (2 * gamma)), tau_rate=0.5,
            theta_coeff=delta / (2 * gamma), theta_exponent=r,
            r_threshold=r_critical_threshold, theta_sign=theta_sign,
        )
    if r <= -1:
        raise ConfigError(f"gamma = 0 requires r > -1, got {r}")
    beta = (1 + r) / 2
    # printed form: dtheta/dtau' = (r/beta) theta, i.e. theta ~ t^r;
    # exponent matching gives theta ~ t^(-r) instead
    sign = 1 if theta_sign == "printed" else -1
    return CaseConfig(
        gamma=gamma, delta=delta, r=r,
        case_tag="B2" if critical else "B1",
        alpha=beta, beta=beta, c_const=math.sqrt(delta * beta), sigma=Fraction(1),
        theta_rate=sign * _exact(r) / _exact(beta),
        zeta_scale=math.sqrt(beta / delta), tau_rate=beta,
        theta_coeff=math.sqrt(beta / delta), theta_exponent=sign * r,
        r_threshold=r_critical_threshold, theta_sign=theta_sign,
    )


# physical manifold -----------------------------------------------------------------

@dataclass(frozen=True)
class PhysicalManifold:
    config: CaseConfig
    manifold: GaussianSeries

    def evaluate(self, x, t: float, A: float):
        """u(x, t) on the manifold with amplitude A; x may be an array."""
        if not t > 0:
            raise ValueError(f"t must be positive, got {t}")
        cfg = self.config
        theta = cfg.theta(t) if cfg.two_mode else 0.0
        v = evaluate_grid(self.manifold, cfg.zeta(x, t), A, theta)
        return cfg.u_scale(t) * v


def back_transform(res: ReductionResult, cfg: CaseConfig) -> PhysicalManifold:
    if res.system != cfg.case_tag:
        raise ValueError(f"reduction for {res.system} does not match configuration {cfg.case_tag}")
    return PhysicalManifold(cfg, res.manifold)


# amplitude law in physical time ----------------------------------------------------

@dataclass(frozen=True)
class AmplitudeLawODE:
    """dA/dt = sum_{p,q} coeffs[(p, q)] A^p theta(t)^q / t."""

    coeffs: dict[tuple[int, int], float]
    theta_of_t: Callable[[float], float]

    def rate_log(self, t: float, A: float) -> float:
        """dA/d(log t)."""
        th = self.theta_of_t(t)
        return sum(c * A**p * th**q for (p, q), c in self.coeffs.items())

    def rhs(self, t: float, A: float) -> float:
        return self.rate_log(t, A) / t

    @classmethod
    def from_reduction(cls, res: ReductionResult, cfg: CaseConfig) -> "AmplitudeLawODE":
        coeffs = {(key.p, key.q): cfg.tau_rate * float(c) for key, c in res.amplitude_law.items()}
        theta = cfg.theta if cfg.two_mode else (lambda t: 0.0)
        return cls(coeffs, theta)


@dataclass
class AmplitudeTrace:
    t: np.ndarray
    A: np.ndarray
    theta: np.ndarray = field(default=None)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.A = np.asarray(self.A, dtype=float)
        self.theta = np.zeros_like(self.t) if self.theta is None else np.asarray(self.theta, dtype=float)
        if not (len(self.t) == len(self.A) == len(self.theta)):
            raise ValueError("t, A, theta must have equal length")
        if len(self.t) > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("trace times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.t)

    def window(self, t_lo: float, t_hi: float) -> "AmplitudeTrace":
        m = (self.t >= t_lo) & (self.t <= t_hi)
        return AmplitudeTrace(self.t[m], self.A[m], self.theta[m])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "A", "theta"])
        for row in zip(self.t, self.A, self.theta):
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "AmplitudeTrace":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls([float(r["t"]) for r in rows], [float(r["A"]) for r in rows],
                   [float(r["theta"]) for r in rows])

    def to_json(self) -> str:
        return json.dumps({"t": self.t.tolist(), "A": self.A.tolist(), "theta": self.theta.tolist()})


def integrate_amplitude(law: AmplitudeLawODE, A0: float, t0: float, t1: float, steps: int) -> AmplitudeTrace:
    """Classic RK4 in s = log t with uniform steps; works for t1 < t0 as well."""
    if not t0 > 0 or not t1 > 0:
        raise ValueError("times must be positive")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    s0, s1 = math.log(t0), math.log(t1)
    ds = (s1 - s0) / steps

    def f(s, A):
        return law.rate_log(math.exp(s), A)

    s_vals = s0 + ds * np.arange(steps + 1)
    A_vals = np.empty(steps + 1)
    A = A_vals[0] = A0
    for i in range(steps):
        s = s_vals[i]
        k1 = f(s, A)
        k2 = f(s + ds / 2, A + ds / 2 * k1)
        k3 = f(s + ds / 2, A + ds / 2 * k2)
        k4 = f(s + ds, A + ds * k3)
        A = A + ds / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        A_vals[i + 1] = A
    t_vals = np.exp(s_vals)
    if ds < 0:
        t_vals, A_vals = t_vals[::-1], A_vals[::-1]
    theta = np.array([law.theta_of_t(t) for t in t_vals], dtype=float)
    return AmplitudeTrace(t_vals, A_vals, theta)
