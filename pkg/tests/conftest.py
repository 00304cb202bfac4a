"""Shared reporting plumbing for the acceptance suite.

Each acceptance criterion records exactly one PASS/FAIL line; the
lines are replayed after the run in a dedicated terminal section so
they stay visible regardless of output capturing.
"""

import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
