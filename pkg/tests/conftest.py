import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE = pytest.StashKey()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash[ACCEPTANCE]

    def emit(number, ok, detail):
        line = "%s criterion %d: %s" % ("PASS" if ok else "FAIL", number, detail)
        lines.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[ACCEPTANCE]
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
