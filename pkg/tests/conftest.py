"""Shared fixtures and the acceptance-criteria reporting hook."""

from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


class AcceptanceLog:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def __init__(self):
        self.results = {}

    def register(self, number: int, description: str):
        self.results.setdefault(number, (description, "NOT RUN"))

    @contextmanager
    def criterion(self, number: int, description: str):
        try:
            yield
        except BaseException:
            self.results[number] = (description, "FAIL")
            raise
        else:
            self.results[number] = (description, "PASS")


ACCEPTANCE = AcceptanceLog()


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE.results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE.results):
        description, status = ACCEPTANCE.results[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {description}")
