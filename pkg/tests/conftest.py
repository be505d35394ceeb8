"""Shared pytest plumbing.

The acceptance tests append one verdict line per criterion here; the
terminal summary prints them after the run so the pass/fail state of
each criterion is visible even though pytest captures stdout.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
