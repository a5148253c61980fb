"""Collects one PASS/FAIL line per acceptance criterion and prints them after the run."""

import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Call with (label, ok, detail); the line is recorded even if the test then fails."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}" + (f": {detail}" if detail else "")
        _LINES.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
