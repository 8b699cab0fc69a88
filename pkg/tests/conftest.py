import numpy as np
import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion():
    """Record one PASS/FAIL line per acceptance criterion and echo it."""

    def record(tag, passed, detail):
        line = f"{tag} {'PASS' if passed else 'FAIL'}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
