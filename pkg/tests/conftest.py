import warnings

import pytest

from locscale_w1.dp import PrivacyBudgetWarning


@pytest.fixture
def no_budget_warning():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PrivacyBudgetWarning)
        yield


def rel_err(got, want):
    return abs(got - want) / max(1.0, abs(want))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
