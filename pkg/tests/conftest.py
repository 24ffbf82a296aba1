import logging

import pytest

from dyncolor.trace import UpdateEvent

# Worked example: six intervals in arrival order.
WORKED = [(1, 2), (8, 9), (1, 7), (3, 9), (4, 6), (4, 6)]
WORKED_LEVELS = (0, 0, 1, 1, 0, 2)

# one "criterion N: PASS/FAIL ..." line per acceptance criterion, echoed in
# the terminal summary so they survive output capture
ACCEPTANCE_LINES: list[str] = []


def worked_trace():
    return [UpdateEvent.insert(i, lo, hi) for i, (lo, hi) in enumerate(WORKED, 1)]


@pytest.fixture
def worked():
    return worked_trace()


@pytest.fixture(autouse=True)
def _quiet_engine_warnings(caplog):
    # broken-state warnings are expected in some tests; keep logs readable
    caplog.set_level(logging.ERROR, logger="dyncolor")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
