"""Reduce all four cases and write text + JSON reports under results/cases/."""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from burgers_cm import golden
from burgers_cm.models import configure
from burgers_cm.reducer import reduce
from burgers_cm.report import dumps, json_report, text_report


@dataclass(frozen=True)
class CaseRun:
    tag: str
    gamma: float
    delta: float
    r: float


CASES = (CaseRun("A1", 1, 1, -0.5), CaseRun("A2", 1, 1, 0), CaseRun("B1", 0, 1, -0.5), CaseRun("B2", 0, 1, 0))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/cases"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    ref = golden.load()
    for case in CASES:
        cfg = configure(case.gamma, case.delta, case.r)
        res = reduce(cfg.system())
        (args.out / f"{case.tag}.json").write_text(dumps(json_report(res, cfg)))
        (args.out / f"{case.tag}.txt").write_text(text_report(res, cfg))
        line = f"{case.tag}: {res.iterations} iterations"
        if ref[case.tag].get("manifold"):
            rep = golden.compare_manifold(res, ref[case.tag]["manifold"], ref[case.tag].get("unprinted", ()))
            line += f", {len(rep.matched)} reference terms match, {len(rep.flagged)} flagged, {len(rep.mismatches)} mismatched"
        print(line)
        print(text_report(res, cfg))


if __name__ == "__main__":
    main()
