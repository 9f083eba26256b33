"""Shared test plumbing: collects acceptance-criterion verdicts so the
terminal summary ends with one PASS/FAIL line per criterion."""

from __future__ import annotations

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria summary:")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line("  " + line)
