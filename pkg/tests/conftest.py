from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture
def record():
    """Collect one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def _record(label: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}{': ' + detail if detail else ''}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
