import pytest

from burgers_cm import golden
from burgers_cm.models import configure
from burgers_cm.reducer import reduce

CASE_PARAMS = {"A1": (1, 1, -0.5), "A2": (1, 1, 0), "B1": (0, 1, -0.5), "B2": (0, 1, 0)}

_acceptance_lines: list[str] = []


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    _acceptance_lines.append(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def reference():
    return golden.load()


@pytest.fixture(scope="session")
def reductions():
    out = {}
    for tag, params in CASE_PARAMS.items():
        cfg = configure(*params)
        out[tag] = (cfg, reduce(cfg.system()))
    return out


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
