"""Invariant suite behind ``burgers-cm selftest``."""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import golden
from .models import configure
from .operators import (
    OperatorSigma,
    apply_S,
    convergence_diagnostics,
    hermite_mode,
    linv,
    moment,
)
from .reducer import ReductionResult, linv_roundtrip_defects, reduce
from .series import GaussianSeries, Truncation, scale


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


def check_spectrum(l_max: int = 7) -> Check:
    bad = []
    for sigma in (Fraction(1, 2), Fraction(1), Fraction(2)):
        op = OperatorSigma(sigma)
        for l in range(l_max + 1):
            h = hermite_mode(l)
            if apply_S(op, h) != scale(h, sigma - 1 - l):
                bad.append((sigma, l))
    return Check("eigenrelation S_sigma He_l G = (sigma-1-l) He_l G", not bad, f"failures {bad}" if bad else f"l <= {l_max}")


def check_linv_examples() -> Check:
    t = Truncation(10, 6, 1)
    zg = GaussianSeries.term(1, k=1, n=1)
    ok = linv(zg, t) == scale(zg, -1)
    g = linv(GaussianSeries.term(1, k=1), t)
    ok &= g[(1, 2, 0, 0)] == Fraction(1, 2) and g[(1, 4, 0, 0)] == Fraction(1, 12)
    return Check("linv examples", bool(ok), "linv(zG) = -zG, linv(G) = G(z^2/2 + z^4/12 + ...)")


def check_moments(m_max: int = 6, k_max: int = 5, rtol: float = 1e-12) -> Check:
    # trapezoid sums of Gaussian integrands converge geometrically fast
    z = np.linspace(-30, 30, 2401)
    dz = 60 / 2400
    worst = 0.0
    for k in range(k_max + 1):
        w = np.exp(-(k + 1) * z * z / 2)
        for m in range(m_max + 1):
            num = math.fsum(z ** (2 * m) * w) * dz / math.sqrt(math.pi)
            worst = max(worst, abs(num - float(moment(2 * m, k))) / abs(num))
    return Check("Gaussian moment closed form vs quadrature", worst < rtol, f"max rel err {worst:.2e}")


def check_series_diagnostics(n_max: int = 30) -> Check:
    d = convergence_diagnostics(n_max)
    rec_ok = d.denominators[0] == 2 and d.denominators[1] == 12
    for n in range(2, n_max + 1):
        # c_2n = c_(2n-2) * 2n(2n-1) / (2(n-1))
        rec_ok &= d.denominators[n - 1] == d.denominators[n - 2] * Fraction(2 * n * (2 * n - 1), 2 * (n - 1))
    est = d.ratio_limit_estimate()
    ok = rec_ok and abs(est - 0.5) <= 0.02
    return Check("linv(G) coefficient recurrence and ratio test", bool(ok), f"ratio limit estimate {est:.4f}")


def _reduction_checks(tag: str, res: ReductionResult, ref: dict) -> list[Check]:
    out = []
    rt = linv_roundtrip_defects(res)
    out.append(Check(f"{tag}: linv round trip", all(d.is_zero() for d in rt), f"{len(rt)} right-hand sides"))
    amp = all(rec.amplitude_defect.is_zero() for rec in res.history)
    out.append(Check(f"{tag}: amplitude condition each iteration", amp, f"{len(res.history)} iterations"))
    law = golden.compare_law(res, ref["law"])
    if not ref["law"]:
        law_ok = res.amplitude_law.is_zero()
    else:
        law_ok = law.ok
    out.append(Check(f"{tag}: amplitude law", law_ok, "; ".join(map(str, law.mismatches))))
    man = golden.compare_manifold(res, ref["manifold"], ref.get("unprinted", ()))
    detail = f"{len(man.matched)} matched, {len(man.flagged)} flagged"
    if man.mismatches:
        detail += f", mismatches {man.mismatches}"
    out.append(Check(f"{tag}: manifold coefficients", man.ok, detail))
    return out


def check_negative_control(res: ReductionResult, ref: dict) -> Check:
    """A perturbed reference must be caught."""
    bad = copy.deepcopy(ref["manifold"])
    target = next(e for e in bad if "expected" not in e and e["printed"] != "1")
    target["printed"] = str(golden._dec(target["printed"]) + golden.PLACES)
    caught = not golden.compare_manifold(res, bad).ok
    return Check("negative control (perturbed reference is rejected)", caught)


def run(fixture=None) -> list[Check]:
    ref = golden.load(fixture)
    checks = [check_spectrum(), check_linv_examples(), check_moments(), check_series_diagnostics()]
    for tag in ("A1", "A2", "B1", "B2"):
        cfg = configure(*ref[tag]["params"])
        res = reduce(cfg.system())
        checks += _reduction_checks(tag, res, ref[tag])
        if tag == "A1":
            checks.append(check_negative_control(res, ref[tag]))
    return checks
