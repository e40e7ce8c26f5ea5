"""Method-of-lines solver for u_t + (u^2/2)_x = (gamma + delta t^r) u_xx.

A fixed physical grid wide enough for the similarity window at the final time,
conservative central fluxes, and classic RK4 in time.  Used to check the
reduced amplitude laws against direct simulation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .models import AmplitudeLawODE, AmplitudeTrace, CaseConfig, integrate_amplitude

log = logging.getLogger(__name__)

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


class GridError(ValueError):
    pass


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid:
    """Half-width ``L`` in the similarity variable and ``N`` interior points."""

    L: float = 10.0
    N: int = 1024

    def __post_init__(self):
        if self.N < 64:
            raise GridError(f"grid needs N >= 64 interior points, got {self.N}")
        if self.L < 8:
            raise GridError(f"grid half-width L must be >= 8, got {self.L}")

    @property
    def spacing(self) -> float:
        return 2 * self.L / (self.N + 1)

    def physical(self, cfg: CaseConfig, t_end: float) -> np.ndarray:
        """Interior nodes in x, sized so |z| <= L covers the window at t_end."""
        half = self.L * t_end**cfg.beta / cfg.zeta_scale
        dx = 2 * half / (self.N + 1)
        return -half + dx * np.arange(1, self.N + 1)


@dataclass
class Field:
    x: np.ndarray
    values: np.ndarray
    time: float

    def __post_init__(self):
        if not self.time > 0:
            raise ValueError("field time must be positive")
        if not np.all(np.isfinite(self.values)):
            raise SolverError(f"non-finite values in field at t={self.time}")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def mass(self) -> float:
        # boundary values are pinned to zero, so the trapezoid rule is a plain sum
        return float(np.sum(self.values) * self.dx)

    def to_csv(self) -> str:
        lines = ["x,u"] + [f"{x!r},{u!r}" for x, u in zip(self.x.tolist(), self.values.tolist())]
        return "\n".join(lines) + "\n"


def gaussian_initial(cfg: CaseConfig, grid: Grid, A0: float, t0: float, t_end: float) -> Field:
    """u(x, t0) = C t0^(-alpha) A0 exp(-z^2/2)."""
    x = grid.physical(cfg, t_end)
    z = cfg.zeta(x, t0)
    return Field(x, cfg.u_scale(t0) * A0 * np.exp(-z**2 / 2), t0)


def _rhs(u: np.ndarray, D: float, dx: float, nonlinear: bool) -> np.ndarray:
    up = np.empty(u.size + 2)
    up[0] = up[-1] = 0.0
    up[1:-1] = u
    out = D * (up[2:] - 2 * up[1:-1] + up[:-2]) / dx**2
    if nonlinear:
        sq = up * up
        # F_{i+1/2} = (u_i^2 + u_{i+1}^2)/4
        flux = (sq[1:] + sq[:-1]) / 4
        out -= (flux[1:] - flux[:-1]) / dx
    return out


@dataclass
class RunStats:
    steps: int = 0
    t_final: float = 0.0
    mass_initial: float = 0.0
    mass_final: float = 0.0
    min_dt: float = math.inf
    max_dt: float = 0.0

    @property
    def mass_drift(self) -> float:
        if self.mass_initial == 0:
            return abs(self.mass_final)
        return abs(self.mass_final - self.mass_initial) / abs(self.mass_initial)


@dataclass
class Solution:
    snapshots: list[Field]
    stats: RunStats
    trace: AmplitudeTrace | None = None
    masses: list[float] = field(default_factory=list)


def solve(
    cfg: CaseConfig,
    initial: Field,
    t_end: float,
    cfl: float = 0.4,
    *,
    sample_times=None,
    nonlinear: bool = True,
    min_dt: float = 1e-12,
) -> Solution:
    """Integrate from ``initial.time`` to ``t_end``; snapshot at each sample time.

    Step size is cfl * min(dx^2 / Delta(t), dx / max|u|).
    """
    t = initial.time
    if not t_end > t:
        raise ValueError("t_end must exceed the initial time")
    if not 0 < cfl <= 0.5:
        raise ValueError("cfl must lie in (0, 0.5]")
    x, dx = initial.x, initial.dx
    targets = sorted(set(float(s) for s in (sample_times if sample_times is not None else [])) | {t_end})
    targets = [s for s in targets if s > t]
    u = initial.values.copy()
    stats = RunStats(mass_initial=initial.mass())
    snaps = [Field(x, u.copy(), t)] if sample_times is not None and t in set(sample_times) else []
    masses = []
    for target in targets:
        while t < target:
            Delta = 2 * cfg.diffusivity(t)
            umax = float(np.max(np.abs(u))) if nonlinear else 0.0
            dt = dx * dx / Delta
            if umax > 0:
                dt = min(dt, dx / umax)
            dt *= cfl
            if dt < min_dt:
                raise SolverError(f"time step underflow (dt={dt:.3e}) at t={t:.6g}")
            if t + dt >= target * (1 - 1e-14):
                dt = target - t
            D1 = cfg.diffusivity(t)
            Dh = cfg.diffusivity(t + dt / 2)
            D2 = cfg.diffusivity(t + dt)
            k1 = _rhs(u, D1, dx, nonlinear)
            k2 = _rhs(u + dt / 2 * k1, Dh, dx, nonlinear)
            k3 = _rhs(u + dt / 2 * k2, Dh, dx, nonlinear)
            k4 = _rhs(u + dt * k3, D2, dx, nonlinear)
            u = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t = target if dt == target - t else t + dt
            stats.steps += 1
            stats.min_dt = min(stats.min_dt, dt)
            stats.max_dt = max(stats.max_dt, dt)
            if not np.all(np.isfinite(u)):
                raise SolverError(f"non-finite field at t={t:.6g} after {stats.steps} steps")
        snap = Field(x, u.copy(), t)
        snaps.append(snap)
        masses.append(snap.mass())
    stats.t_final = t
    stats.mass_final = masses[-1]
    log.debug("solve: %d steps, dt in [%.3e, %.3e]", stats.steps, stats.min_dt, stats.max_dt)
    return Solution(snaps, stats, masses=masses)


def extract_amplitude(f: Field, cfg: CaseConfig) -> float:
    """(1/sqrt(pi)) * integral of v exp(-z^2/2) dz, trapezoidal on the grid."""
    z = cfg.zeta(f.x, f.time)
    v = f.values / cfg.u_scale(f.time)
    return float(_trapezoid(v * np.exp(-z**2 / 2), z) / math.sqrt(math.pi))


def run_trace(
    cfg: CaseConfig,
    grid: Grid,
    A0: float,
    t0: float = 1.0,
    t_end: float = 100.0,
    samples: int = 121,
    cfl: float = 0.4,
    nonlinear: bool = True,
) -> Solution:
    """Solve from Gaussian data and sample A(t) on a log-uniform time grid."""
    initial = gaussian_initial(cfg, grid, A0, t0, t_end)
    times = np.geomspace(t0, t_end, samples)
    sol = solve(cfg, initial, t_end, cfl, sample_times=times[1:], nonlinear=nonlinear)
    fields = [initial] + sol.snapshots
    A = [extract_amplitude(f, cfg) for f in fields]
    t = [f.time for f in fields]
    theta = [float(cfg.theta(s)) for s in t]
    sol.trace = AmplitudeTrace(t, A, theta)
    sol.snapshots = fields
    sol.masses = [initial.mass()] + sol.masses
    return sol


# comparison ---------------------------------------------------------------------------

@dataclass
class ComparisonReport:
    late_window: tuple[float, float]
    max_rel_deviation: float
    transient_exponent: float
    expected_exponent: float
    slope_ratio: float        # measured dA/dlog t / A^3 over the late window
    law_slope_ratio: float    # same quantity from the law at the window's mean A

    def to_dict(self) -> dict:
        return dict(vars(self))


def log_slope_over_cube(trace: AmplitudeTrace) -> float:
    """Least-squares dA/d(log t) divided by the mean of A^3."""
    s = np.log(trace.t)
    slope = np.polyfit(s, trace.A, 1)[0]
    return float(slope / np.mean(trace.A**3))


def fit_power_decay(t: np.ndarray, d: np.ndarray) -> float:
    """Exponent k in |d| ~ t^(-k), from a log-log least-squares fit."""
    m = np.abs(d) > 0
    if np.count_nonzero(m) < 2:
        return float("nan")  # no measurable transient
    return float(-np.polyfit(np.log(t[m]), np.log(np.abs(d[m])), 1)[0])


def compare(
    trace: AmplitudeTrace,
    law: AmplitudeLawODE,
    cfg: CaseConfig | None = None,
    late_fraction: float = 0.5,
    early_decades: float = 1.0,
    steps_per_decade: int = 400,
) -> ComparisonReport:
    """Compare a measured trace with an amplitude law.

    Late window: the last ``late_fraction`` of the trace in log t; the law is
    integrated from the window's first sample.  Transient: the law is pinned to
    the final sample and integrated backwards; the deviation over the first
    ``early_decades`` decades is fitted to a power of t.
    """
    t0, t1 = float(trace.t[0]), float(trace.t[-1])
    if t1 / t0 < 10 * (1 - 1e-12):
        raise ValueError("trace must span at least one decade in t")
    t_late = math.exp(math.log(t1) - late_fraction * (math.log(t1) - math.log(t0)))
    late = trace.window(t_late, t1)

    def law_at(A_start, ta, tb, times):
        steps = max(1, int(abs(math.log10(tb / ta)) * steps_per_decade))
        path = integrate_amplitude(law, A_start, ta, tb, steps)
        return np.interp(np.log(times), np.log(path.t), path.A)

    A_model = law_at(late.A[0], late.t[0], t1, late.t)
    dev = float(np.max(np.abs(late.A - A_model) / np.abs(A_model)))
    early = trace.window(t0, t0 * 10**early_decades)
    A_pinned = law_at(trace.A[-1], t1, t0, early.t)
    exponent = fit_power_decay(early.t, early.A - A_pinned)
    A_mean = float(np.mean(late.A))
    law_ratio = law.rate_log(float(np.sqrt(late.t[0] * late.t[-1])), A_mean) / A_mean**3
    return ComparisonReport(
        late_window=(float(late.t[0]), t1),
        max_rel_deviation=dev,
        transient_exponent=exponent,
        expected_exponent=cfg.transient_exponent() if cfg else float("nan"),
        slope_ratio=log_slope_over_cube(late),
        law_slope_ratio=float(law_ratio),
    )
