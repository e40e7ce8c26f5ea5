import math

import numpy as np
import pytest

from burgers_cm.models import AmplitudeLawODE, back_transform, configure, integrate_amplitude
from burgers_cm.pde import (
    Field,
    Grid,
    GridError,
    SolverError,
    compare,
    extract_amplitude,
    fit_power_decay,
    gaussian_initial,
    log_slope_over_cube,
    run_trace,
    solve,
)

B1 = configure(0, 1, -0.5)
A1 = configure(1, 1, -0.5)


def exact_linear(cfg, A0, x, t):
    return cfg.u_scale(t) * A0 * np.exp(-cfg.zeta(x, t) ** 2 / 2)


# --- grid and fields --------------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(GridError):
        Grid(10, 32)
    with pytest.raises(GridError):
        Grid(4, 256)
    g = Grid(10, 99)
    assert g.spacing == pytest.approx(0.2)
    x = g.physical(A1, 100.0)
    assert len(x) == 99 and x[0] == pytest.approx(-x[-1])


def test_field_checks():
    with pytest.raises(ValueError):
        Field(np.zeros(3), np.zeros(3), 0.0)
    with pytest.raises(SolverError):
        Field(np.arange(3.0), np.array([0.0, np.nan, 0.0]), 1.0)
    f = Field(np.array([0.0, 0.5]), np.array([1.0, 2.0]), 1.0)
    assert f.to_csv().splitlines() == ["x,u", "0.0,1.0", "0.5,2.0"]


def test_solve_argument_checks():
    ini = gaussian_initial(A1, Grid(10, 64), 0.1, 1.0, 2.0)
    with pytest.raises(ValueError):
        solve(A1, ini, 1.0)
    with pytest.raises(ValueError):
        solve(A1, ini, 2.0, cfl=0.8)
    with pytest.raises(SolverError, match="underflow"):
        solve(A1, ini, 2.0, min_dt=1.0)


# --- solver oracles --------------------------------------------------------------------------

def test_zero_data_stays_zero():
    g = Grid(10, 128)
    x = g.physical(A1, 5.0)
    sol = solve(A1, Field(x, np.zeros_like(x), 1.0), 5.0)
    assert not np.any(sol.snapshots[-1].values)


def _linear_error(N, t_end=10.0, A0=0.3):
    ini = gaussian_initial(B1, Grid(10, N), A0, 1.0, t_end)
    f = solve(B1, ini, t_end, nonlinear=False).snapshots[-1]
    return float(np.max(np.abs(f.values - exact_linear(B1, A0, f.x, t_end))))


def test_linear_diffusion_matches_exact_gaussian():
    errs = [_linear_error(N) for N in (127, 255, 511)]
    assert errs[-1] < 2e-5
    for coarse, fine in zip(errs, errs[1:]):
        assert 3.6 < coarse / fine < 4.4


def test_extract_amplitude_round_trip():
    for cfg in (A1, B1, configure(1, 1, 0)):
        g = Grid(10, 1024)
        x = g.physical(cfg, 10.0)
        for t in (1.0, 3.0, 10.0):
            f = Field(x, exact_linear(cfg, 0.37, x, t), t)
            assert abs(extract_amplitude(f, cfg) - 0.37) < 1e-10
        assert extract_amplitude(Field(x, np.zeros_like(x), 2.0), cfg) == 0.0


def test_mass_conserved():
    sol = run_trace(A1, Grid(10, 512), 0.3, 1.0, 100.0, samples=11)
    m = np.array(sol.masses)
    assert np.max(np.abs(m - m[0])) / abs(m[0]) <= 1e-8
    assert sol.stats.mass_drift <= 1e-8


def test_even_data_stays_even_without_nonlinearity():
    ini = gaussian_initial(A1, Grid(10, 400), 0.3, 1.0, 20.0)
    u = solve(A1, ini, 20.0, nonlinear=False).snapshots[-1].values
    assert np.max(np.abs(u - u[::-1])) <= 1e-14 * np.max(np.abs(u))


def _cole_hopf(cfg, A0, x, t, t0=1.0):
    # u = -2 nu (log phi)_x, phi_t = nu phi_xx; phi(., t0) from the initial data
    nu = cfg.gamma
    y = np.linspace(-80, 80, 64001)
    dy = y[1] - y[0]
    u0 = exact_linear(cfg, A0, y, t0)
    P = np.concatenate([[0.0], np.cumsum((u0[1:] + u0[:-1]) / 2) * dy])
    phi0 = np.exp(-P / (2 * nu))
    s = t - t0
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        K = np.exp(-((xi - y) ** 2) / (4 * nu * s))
        out[i] = -2 * nu * np.sum(-(xi - y) / (2 * nu * s) * K * phi0) / np.sum(K * phi0)
    return out


@pytest.mark.slow
def test_constant_diffusivity_burgers_against_cole_hopf_and_refinement():
    cfg = configure(1, 1e-12, -0.5)
    A0, t_end = 0.2, 5.0
    runs = {}
    for N in (1023, 2047):
        ini = gaussian_initial(cfg, Grid(10, N), A0, 1.0, t_end)
        runs[N] = solve(cfg, ini, t_end).snapshots[-1]
    coarse, fine = runs[1023], runs[2047]
    assert np.allclose(fine.x[1::2], coarse.x, rtol=0, atol=1e-12)
    scale = np.max(np.abs(fine.values))
    assert np.max(np.abs(coarse.values - fine.values[1::2])) / scale < 1e-4
    ref = _cole_hopf(cfg, A0, coarse.x[::8], t_end)
    assert np.max(np.abs(coarse.values[::8] - ref)) / scale < 1e-4


def test_nonlinear_skew_sign_is_positive():
    # u > 0 travels right: the first and third similarity moments turn positive
    sol = run_trace(A1, Grid(10, 1024), 0.3, 1.0, 100.0, samples=3)
    f = sol.snapshots[-1]
    z = A1.zeta(f.x, f.time)
    v = f.values / A1.u_scale(f.time)
    assert np.sum(z * v) > 0 and np.sum(z**3 * v) > 0


@pytest.mark.xfail(strict=True, reason="truncated z^3 G^2 block has the opposite sign to the simulated skew; see notes")
def test_skew_sign_matches_manifold_block(reductions):
    cfg, res = reductions["A1"]
    assert res.manifold[(2, 3, 2, 0)] < 0  # the block coefficient itself is negative
    sol = run_trace(cfg, Grid(10, 1024), 0.3, 1.0, 100.0, samples=3)
    f = sol.snapshots[-1]
    z = cfg.zeta(f.x, f.time)
    v = f.values / cfg.u_scale(f.time)
    measured = np.sign(np.sum(z**3 * v))
    pm = back_transform(res, cfg)
    predicted = np.sign(np.sum(z**3 * pm.evaluate(f.x, f.time, float(sol.trace.A[-1]))))
    assert measured == predicted


# --- comparison harness --------------------------------------------------------------------------

def test_compare_against_itself_is_exact(reductions):
    cfg, res = reductions["A1"]
    law = AmplitudeLawODE.from_reduction(res, cfg)
    tr = integrate_amplitude(law, 0.3, 1.0, 100.0, 800)
    rep = compare(tr, law, cfg)
    assert rep.max_rel_deviation < 1e-9
    assert rep.expected_exponent == 0.5
    assert rep.slope_ratio == pytest.approx(rep.law_slope_ratio, rel=1e-2)


def test_compare_needs_a_decade(reductions):
    cfg, res = reductions["A1"]
    law = AmplitudeLawODE.from_reduction(res, cfg)
    tr = integrate_amplitude(law, 0.3, 1.0, 5.0, 50)
    with pytest.raises(ValueError):
        compare(tr, law, cfg)


def test_b1_run_stays_within_theta_correction(reductions):
    cfg, res = reductions["B1"]
    law = AmplitudeLawODE.from_reduction(res, cfg)
    A0 = 0.1
    sol = run_trace(cfg, Grid(10, 1024), A0, 1.0, 100.0, samples=61)
    rep = compare(sol.trace, law, cfg)
    late = sol.trace.window(*rep.late_window)
    # leading neglected term of the two-mode model is relative size A theta
    assert rep.max_rel_deviation <= A0 * float(np.max(np.abs(late.theta)))


def test_fit_helpers():
    t = np.geomspace(1, 100, 50)
    assert fit_power_decay(t, 3 * t**-0.5) == pytest.approx(0.5)
    from burgers_cm.models import AmplitudeTrace

    s = np.log(t)
    A = 0.2 + 0.001 * s
    assert log_slope_over_cube(AmplitudeTrace(t, A)) == pytest.approx(0.001 / np.mean(A**3))
    assert math.isnan(fit_power_decay(t, np.zeros_like(t)))
