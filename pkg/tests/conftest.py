"""Shared pytest hooks: print one line per acceptance criterion at the end."""

from __future__ import annotations

ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def record_criterion(name: str, ok: bool) -> None:
    ACCEPTANCE_RESULTS.append((name, ok))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")
