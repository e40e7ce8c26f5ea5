"""Text and JSON rendering of reduction results, rounded to 4 decimals.

Rounding is round-half-even on the exact value; nothing upstream is rounded.
"""
from __future__ import annotations

import json
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from itertools import groupby

from .models import CaseConfig
from .reducer import ReductionResult, vars_of
from .series import GaussianSeries, scale
from .surd import Surd

PLACES = Decimal("0.0001")
_SUP = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def round4(c: Surd | float) -> Decimal:
    d = c.to_decimal(30) if isinstance(c, Surd) else Decimal(repr(float(c)))
    return d.quantize(PLACES, rounding=ROUND_HALF_EVEN)


def fmt4(c) -> str:
    """Signed 4-decimal string with an ASCII minus, e.g. '-0.0022'."""
    d = round4(c)
    return str(d + 0)  # + 0 turns -0.0000 into 0.0000


def exact_str(c: Surd) -> str:
    if not c:
        return "0"
    bits = []
    for d, q in c.items():
        bits.append(str(q) if d == 1 else f"{q}*sqrt({d})")
    return " + ".join(bits).replace("+ -", "- ")


def _power(sym: str, e: int, ascii_: bool) -> str:
    if e == 0:
        return ""
    if e == 1:
        return sym
    return f"{sym}^{e}" if ascii_ else sym + str(e).translate(_SUP)


def _monomial(parts, ascii_: bool) -> str:
    names = {"G": "G", "z": "z" if ascii_ else "ζ", "A": "A", "t": "theta" if ascii_ else "θ"}
    out = [_power(names[s], e, ascii_) for s, e in parts]
    out = [o for o in out if o]
    return ("*" if ascii_ else "").join(out)


def _render_groups(groups, ascii_: bool) -> str:
    """groups: [(prefix, [(Decimal, var), ...])] -> '0.0641A³ − 0.0022A⁵' style."""
    minus = "-" if ascii_ else "−"
    mul = "*" if ascii_ else ""
    text = ""
    for prefix, terms in groups:
        terms = [(c, v) for c, v in terms if c != 0]
        if not terms:
            continue
        lead = terms[0][0]
        sign = -1 if lead < 0 else 1
        if len(terms) == 1:
            c, v = terms[0]
            mag = "" if abs(c) == 1 and (prefix or v) else str(abs(c))
            body = mul.join(x for x in (mag, prefix, v) if x)
        else:
            inner = ""
            for i, (c, v) in enumerate(terms):
                c = c * sign
                piece = mul.join(x for x in (str(abs(c)), v) if x)
                if i == 0:
                    inner = piece if c > 0 else f"{minus}{piece}"
                else:
                    inner += f" {minus if c < 0 else '+'} {piece}"
            body = f"{prefix}{mul if prefix else ''}({inner})"
        if not text:
            text = body if sign > 0 else f"{minus}{body}"
        else:
            text += f" {minus if sign < 0 else '+'} {body}"
    return text or "0"


def render_law(law: GaussianSeries, ascii_: bool = False) -> str:
    """Right-hand side of the amplitude law grouped by powers of A."""
    items = sorted(law.items(), key=lambda kv: (kv[0].p, kv[0].q))
    groups = []
    for p, block in groupby(items, key=lambda kv: kv[0].p):
        groups.append((_monomial([("A", p)], ascii_),
                       [(round4(c), _monomial([("t", key.q)], ascii_)) for key, c in block]))
    return _render_groups(groups, ascii_)


def render_manifold(v: GaussianSeries, ascii_: bool = False) -> str:
    """v grouped in blocks G^k A^p theta^q (polynomial in z)."""
    items = sorted(v.items(), key=lambda kv: (kv[0].p, kv[0].k, kv[0].q, kv[0].n))
    groups = []
    for (p, k, q), block in groupby(items, key=lambda kv: (kv[0].p, kv[0].k, kv[0].q)):
        prefix = _monomial([("G", k), ("A", p), ("t", q)], ascii_)
        groups.append((prefix, [(round4(c), _monomial([("z", key.n)], ascii_)) for key, c in block]))
    return _render_groups(groups, ascii_)


def law_table(law: GaussianSeries, scale_by: float | None = None) -> list[dict]:
    rows = []
    for key, c in sorted(law.items(), key=lambda kv: (kv[0].p, kv[0].q)):
        row = {"p": key.p, "q": key.q, "exact": exact_str(c), "value": float(c), "rounded": fmt4(c)}
        if scale_by is not None:
            row["physical"] = fmt4(float(c) * scale_by)
        rows.append(row)
    return rows


def physical_law_text(res: ReductionResult, cfg: CaseConfig, ascii_: bool = False) -> str:
    if res.amplitude_law.is_zero():
        return "dA/dt = 0"
    scaled = scale(res.amplitude_law, Fraction(cfg.tau_rate).limit_denominator(10**9))
    inv_t = "/t" if ascii_ else "·t⁻¹"
    return f"dA/dt = [{render_law(scaled, ascii_)}]{inv_t}"


def law_line(res: ReductionResult, ascii_: bool = False) -> str:
    lhs = "dA/dtau'" if ascii_ or res.amplitude_law.is_zero() else "dA/dτ′"
    return f"{lhs} = {render_law(res.amplitude_law, ascii_)}"


def text_report(res: ReductionResult, cfg: CaseConfig, ascii_: bool = False) -> str:
    t = res.truncation
    order = f"O(z^{t.zeta_order}, A^{t.amp_order}" + (f", theta^{t.theta_order})" if cfg.two_mode else ")")
    lines = [
        f"case {cfg.case_tag}  gamma={cfg.gamma:g} delta={cfg.delta:g} r={cfg.r:g}",
        f"truncation {order}  iterations {res.iterations}  moment rule {res.moment_rule}",
        "",
        "amplitude law",
        "  " + law_line(res, ascii_),
        "  " + physical_law_text(res, cfg, ascii_),
    ]
    if cfg.two_mode:
        lines.append(f"  theta(t) = {cfg.theta_coeff:.6g} * t^({cfg.theta_exponent:g})")
    lines += ["", "  p  q  coefficient  exact"]
    for row in law_table(res.amplitude_law):
        exact = row["exact"]
        if len(exact) > 72:
            exact = f"{exact.count('sqrt')}-radical surd, full form in JSON"
        lines.append(f"  {row['p']}  {row['q']}  {row['rounded']:>11}  {exact}")
    lines += ["", "manifold", "  v = " + render_manifold(res.manifold, ascii_), ""]
    return "\n".join(lines)


def json_report(res: ReductionResult, cfg: CaseConfig) -> dict:
    return {
        "config": cfg.to_dict(),
        "result": res.to_dict(),
        "law": law_line(res, ascii_=True),
        "law_unicode": law_line(res),
        "law_table": law_table(res.amplitude_law, scale_by=cfg.tau_rate),
        "manifold_text": render_manifold(res.manifold, ascii_=True),
        "truncation": vars_of(res.truncation),
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
