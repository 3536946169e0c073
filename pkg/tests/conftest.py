"""Shared test plumbing: the acceptance checklist printed after the run.

Acceptance tests register one line per criterion via record_criterion; the
summary hook prints them after the normal pytest output so the verdicts are
visible even under captured output.
"""

ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES.append((name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_LINES:
        line = f"[{'PASS' if passed else 'FAIL'}] {name}"
        if detail:
            line += f": {detail}"
        terminalreporter.write_line(line)
