"""Reference coefficient tables shipped with the package, and the comparison
against a reduction at 4-decimal rendering."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from pathlib import Path

from .report import PLACES, round4
from .reducer import ReductionResult
from .series import TermKey


def load(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files("burgers_cm").joinpath("data/golden.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return json.loads(text)


def _dec(s: str) -> Decimal:
    return Decimal(s).quantize(PLACES)


@dataclass
class GoldenReport:
    matched: list = field(default_factory=list)     # printed value reproduced
    flagged: list = field(default_factory=list)     # known print discrepancy, engine agrees with the correction
    mismatches: list = field(default_factory=list)  # anything else

    @property
    def ok(self) -> bool:
        return not self.mismatches


def compare_manifold(res: ReductionResult, entries: list[dict], unprinted=()) -> GoldenReport:
    rep = GoldenReport()
    seen = set()
    for e in entries:
        key = TermKey(*(e.get("expected_key") or (e["k"], e["n"], e["p"], e["q"])))
        seen.add(key)
        got = round4(res.manifold[key])
        target = _dec(e.get("expected", e["printed"]))
        row = (tuple(key), e["printed"], str(got))
        if got != target:
            rep.mismatches.append(row)
        elif "expected" in e or "expected_key" in e:
            rep.flagged.append(row + (e.get("note", ""),))
        else:
            rep.matched.append(row)
    allowed = {TermKey(u["k"], u["n"], u["p"], u["q"]) for u in unprinted}
    for key, c in res.manifold.items():
        if key in seen or key in allowed:
            continue
        if round4(c) != 0:
            rep.mismatches.append((tuple(key), None, str(round4(c))))
    return rep


def compare_law(res: ReductionResult, entries: list[dict]) -> GoldenReport:
    rep = GoldenReport()
    want = {(e["p"], e["q"]): _dec(e["printed"]) for e in entries}
    for (p, q), target in want.items():
        got = round4(res.law_coefficient(p, q))
        (rep.matched if got == target else rep.mismatches).append(((p, q), str(target), str(got)))
    for key, c in res.amplitude_law.items():
        if (key.p, key.q) not in want and round4(c) != 0:
            rep.mismatches.append(((key.p, key.q), None, str(round4(c))))
    return rep
