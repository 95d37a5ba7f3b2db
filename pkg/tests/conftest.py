import json
from pathlib import Path

import pytest

from beyondmean.effect_sizes import ArmSummary

DATA = Path(__file__).parent / "data"

# Published summary tables: simulated experiment (A, B) and industrial TDD experiment (ITL, TDD).
TABLE1_A = ArmSummary(15, 0.413, 0.115)
TABLE1_B = ArmSummary(15, 0.398, 0.173)
TABLE4_ITL = ArmSummary(20, 0.416, 0.317)
TABLE4_TDD = ArmSummary(20, 0.383, 0.225)

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def reference():
    return json.loads((DATA / "reference_values.json").read_text())


@pytest.fixture(scope="session")
def criterion():
    """Record an acceptance criterion outcome for the end-of-run summary."""

    def record(name: str, passed: bool, detail: str = ""):
        _CRITERIA.append((name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""))
