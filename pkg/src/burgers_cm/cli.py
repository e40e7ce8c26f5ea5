"""Command-line front end: reduce, verify, spectrum, tabulate, selftest.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
Artifacts go to --out, else $BURGERS_CM_OUT, else ./burgers_cm_runs.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import os
import platform
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .models import AmplitudeLawODE, ConfigError, PhysicalManifold, back_transform, configure
from .operators import LinvError, OperatorSigma, apply_S, hermite_mode, spectrum
from .pde import Grid, GridError, SolverError, compare, log_slope_over_cube, run_trace
from .reducer import ReductionError, reduce
from .report import dumps, json_report, text_report
from .series import Truncation, scale

log = logging.getLogger("burgers_cm")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
OUT_ENV = "BURGERS_CM_OUT"

# pass/fail thresholds printed by `verify`
SLOPE_RTOL = 0.15
DRIFT_MAX = 0.02

DEFAULTS = {
    "gamma": 1.0, "delta": 1.0, "r": -0.5, "r_threshold": 1e-3, "theta_sign": "printed",
    "zeta_order": 8, "amp_order": 6, "theta_order": None, "max_iter": 20,
    "format": "text", "a0": None, "t0": 1.0, "t_end": 100.0, "grid_n": 1024,
    "grid_l": 10.0, "cfl": 0.4, "samples": 121,
    "sigma": "1", "l_max": 7,
    "t": 10.0, "amp": 0.3, "x_min": -20.0, "x_max": 20.0, "points": 201,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _case_flags(p):
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--r-threshold", type=float, help="|r| below this selects the two-mode model")
    p.add_argument("--theta-sign", choices=["printed", "matched"])


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="burgers-cm", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON file of flag values (flags override)")
        p.add_argument("--out", type=Path, help=f"output root (default ${OUT_ENV})")

    p = sub.add_parser("reduce", help="derive manifold and amplitude law")
    common(p)
    _case_flags(p)
    p.add_argument("--zeta-order", type=int)
    p.add_argument("--amp-order", type=int)
    p.add_argument("--theta-order", type=int)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--format", choices=["text", "ascii", "json"])

    p = sub.add_parser("verify", help="run the PDE and compare with the reduced law")
    common(p)
    _case_flags(p)
    p.add_argument("--a0", type=float, help="initial amplitude (default 0.3 case A, 0.1 case B)")
    p.add_argument("--t0", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--grid-n", type=int)
    p.add_argument("--grid-l", type=float)
    p.add_argument("--cfl", type=float)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("spectrum", help="eigenvalues of S_sigma on Hermite modes")
    common(p)
    p.add_argument("--sigma", type=str, help="rational, e.g. 1/2")
    p.add_argument("--l-max", type=int)

    p = sub.add_parser("tabulate", help="evaluate u(x, t) on the manifold, CSV")
    common(p)
    _case_flags(p)
    p.add_argument("--t", type=float)
    p.add_argument("--amp", type=float)
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--points", type=int)

    p = sub.add_parser("selftest", help="run the invariant suite")
    common(p)
    p.add_argument("--fixture", type=Path, help="alternative reference table (JSON)")
    return ap


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < flags."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if "args" in data:  # a run manifest
            data = data["args"]
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        opts.update(data)
    for k, v in vars(args).items():
        if k in DEFAULTS and v is not None:
            opts[k] = v
    return opts


def out_dir(args, command: str, tag: str) -> Path:
    root = args.out or Path(os.environ.get(OUT_ENV, "burgers_cm_runs"))
    stamp = _dt.datetime.now().strftime("%Y%m%d-%H%M%S-%f")
    d = Path(root) / f"{command}-{tag}-{stamp}"
    d.mkdir(parents=True, exist_ok=False)
    return d


def write_manifest(d: Path, command: str, opts: dict, outputs: dict, started: float, extra=None):
    manifest = {
        "tool": "burgers-cm",
        "version": __version__,
        "command": command,
        "args": {k: opts[k] for k in sorted(opts)},
        "python": platform.python_version(),
        "numpy": np.__version__,
        "started": _dt.datetime.fromtimestamp(started).isoformat(),
        "elapsed_s": round(time.time() - started, 3),
        "outputs": {k: str(v) for k, v in outputs.items()},
    }
    if extra:
        manifest.update(extra)
    (d / "manifest.json").write_text(dumps(manifest))
    return manifest


def _truncation(opts, cfg) -> Truncation:
    theta = opts["theta_order"]
    if theta is None:
        theta = 1 if not cfg.two_mode else (2 if cfg.case_tag == "A2" else 3)
    return Truncation(int(opts["zeta_order"]), int(opts["amp_order"]), int(theta))


def _configure(opts):
    return configure(float(opts["gamma"]), float(opts["delta"]), float(opts["r"]),
                     float(opts["r_threshold"]), opts["theta_sign"])


# commands ------------------------------------------------------------------

def cmd_reduce(args, opts) -> int:
    started = time.time()
    cfg = _configure(opts)
    res = reduce(cfg.system(), _truncation(opts, cfg), int(opts["max_iter"]))
    d = out_dir(args, "reduce", cfg.case_tag)
    rep = json_report(res, cfg)
    (d / "result.json").write_text(dumps(rep))
    text = text_report(res, cfg, ascii_=opts["format"] == "ascii")
    (d / "report.txt").write_text(text)
    write_manifest(d, "reduce", opts, {"result": d / "result.json", "report": d / "report.txt"}, started,
                   {"truncation": rep["truncation"], "iterations": res.iterations})
    print(dumps(rep) if opts["format"] == "json" else text)
    print(f"artifacts: {d}", file=sys.stderr)
    return EXIT_OK


def _verify_lines(cfg, sol, law, cmp_rep) -> tuple[list[str], dict]:
    trace = sol.trace
    A0, A1 = float(trace.A[0]), float(trace.A[-1])
    last = trace.window(trace.t[-1] / 10, trace.t[-1])
    summary = {
        "case": cfg.case_tag,
        "A_initial": A0,
        "A_final": A1,
        "mass_drift": sol.stats.mass_drift,
        "steps": sol.stats.steps,
        "comparison": cmp_rep.to_dict() if cmp_rep else None,
    }
    lines = [
        f"case {cfg.case_tag}: A(t0) = {A0:.6f}, A(t_end) = {A1:.6f}, {sol.stats.steps} steps",
        f"mass drift: {sol.stats.mass_drift:.3e}",
    ]
    if cfg.case_tag == "B1":
        drift = abs(A1 - A0) / abs(A0) if A0 else abs(A1)
        ok = drift <= DRIFT_MAX
        summary.update(amplitude_drift=drift, passed=ok)
        lines.append(f"amplitude drift: {drift:.4f} (threshold {DRIFT_MAX}) {'PASS' if ok else 'FAIL'}")
    if cfg.case_tag == "A1":
        measured = log_slope_over_cube(last)
        target = law.coeffs.get((3, 0), 0.0)
        rel = abs(measured - target) / abs(target) if target else float("inf")
        ok = rel <= SLOPE_RTOL
        summary.update(slope_ratio=measured, slope_target=target, slope_rel_error=rel, passed=ok)
        lines.append(f"dA/dlog t / A^3 over last decade: {measured:.4f} "
                     f"(law {target:.4f}, tolerance {SLOPE_RTOL:.0%}) {'PASS' if ok else 'FAIL'}")
    if cmp_rep is not None:
        lines.append(f"late-window max relative deviation from law: {cmp_rep.max_rel_deviation:.4f}")
        lines.append(f"transient exponent: {cmp_rep.transient_exponent:.3f} "
                     f"(expected {cmp_rep.expected_exponent:.3f})")
    return lines, summary


def cmd_verify(args, opts) -> int:
    started = time.time()
    cfg = _configure(opts)
    a0 = opts["a0"]
    if a0 is None:
        a0 = 0.3 if cfg.case_tag.startswith("A") else 0.1
        opts["a0"] = a0
    grid = Grid(float(opts["grid_l"]), int(opts["grid_n"]))
    t0, t_end = float(opts["t0"]), float(opts["t_end"])
    if not (t0 > 0 and t_end > t0):
        raise UsageError("need 0 < t0 < t_end")
    res = reduce(cfg.system())
    law = AmplitudeLawODE.from_reduction(res, cfg)
    sol = run_trace(cfg, grid, float(a0), t0, t_end, int(opts["samples"]), float(opts["cfl"]))
    cmp_rep = compare(sol.trace, law, cfg) if t_end / t0 >= 10 else None
    lines, summary = _verify_lines(cfg, sol, law, cmp_rep)
    d = out_dir(args, "verify", cfg.case_tag)
    (d / "trace.csv").write_text(sol.trace.to_csv())
    (d / "final_field.csv").write_text(sol.snapshots[-1].to_csv())
    (d / "comparison.json").write_text(dumps(summary))
    (d / "report.txt").write_text("\n".join(lines) + "\n")
    write_manifest(d, "verify", opts,
                   {"trace": d / "trace.csv", "field": d / "final_field.csv",
                    "comparison": d / "comparison.json", "report": d / "report.txt"},
                   started, {"grid": {"L": grid.L, "N": grid.N},
                             "tolerances": {"slope_rtol": SLOPE_RTOL, "drift_max": DRIFT_MAX}})
    print("\n".join(lines))
    print(f"artifacts: {d}", file=sys.stderr)
    return EXIT_OK


def cmd_spectrum(args, opts) -> int:
    started = time.time()
    try:
        sigma = Fraction(str(opts["sigma"]))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"sigma must be rational: {opts['sigma']!r}") from exc
    l_max = int(opts["l_max"])
    if l_max < 0:
        raise UsageError("--l-max must be >= 0")
    op = OperatorSigma(sigma)
    rows = []
    for entry in spectrum(op, l_max):
        h = hermite_mode(entry.mode_index)
        resid = apply_S(op, h) - scale(h, entry.eigenvalue)
        rows.append({"l": entry.mode_index, "eigenvalue": str(entry.eigenvalue), "residual_terms": len(resid)})
    lines = ["l  eigenvalue  residual"] + [f"{r['l']:<2} {r['eigenvalue']:>10}  {r['residual_terms']}" for r in rows]
    d = out_dir(args, "spectrum", f"sigma{str(sigma).replace('/', '_')}")
    (d / "spectrum.json").write_text(dumps(rows))
    write_manifest(d, "spectrum", opts, {"spectrum": d / "spectrum.json"}, started)
    print("\n".join(lines))
    return EXIT_OK


def cmd_tabulate(args, opts) -> int:
    started = time.time()
    cfg = _configure(opts)
    res = reduce(cfg.system())
    pm: PhysicalManifold = back_transform(res, cfg)
    x = np.linspace(float(opts["x_min"]), float(opts["x_max"]), int(opts["points"]))
    u = pm.evaluate(x, float(opts["t"]), float(opts["amp"]))
    csv = "x,u\n" + "".join(f"{a!r},{b!r}\n" for a, b in zip(x.tolist(), u.tolist()))
    d = out_dir(args, "tabulate", cfg.case_tag)
    (d / "manifold.csv").write_text(csv)
    write_manifest(d, "tabulate", opts, {"table": d / "manifold.csv"}, started)
    sys.stdout.write(csv)
    return EXIT_OK


def cmd_selftest(args, opts) -> int:
    from .selftest import run

    started = time.time()
    checks = run(args.fixture)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.ok]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    d = out_dir(args, "selftest", "all")
    (d / "selftest.json").write_text(dumps([vars(c) for c in checks]))
    write_manifest(d, "selftest", opts, {"results": d / "selftest.json"}, started)
    return EXIT_NUMERIC if failed else EXIT_OK


COMMANDS = {
    "reduce": cmd_reduce,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "tabulate": cmd_tabulate,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        opts = resolve(args)
        return COMMANDS[args.command](args, opts)
    except (UsageError, ConfigError, GridError, ValueError, TypeError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ReductionError, SolverError, LinvError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
