from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fib23_run():
    """One full solve shared by every test that inspects its ledger."""
    from expdioph.pipeline import theorem2_solve

    return theorem2_solve()


def pytest_terminal_summary(terminalreporter):
    try:
        from tests.acceptance_log import RESULTS
    except ImportError:  # pragma: no cover
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
