"""Shared fixtures and the acceptance report.

Acceptance tests register one line per criterion; the lines are printed in
a dedicated section at the end of the run so the verdicts are visible even
when pytest captures stdout.
"""

from typing import List, Tuple

import pytest

ACCEPTANCE_RESULTS: List[Tuple[str, bool, str]] = []


def record_acceptance(name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        line = "%s  %-28s %s" % ("PASS" if passed else "FAIL", name, detail)
        terminalreporter.write_line(line.rstrip())


@pytest.fixture()
def service_client():
    from fastapi.testclient import TestClient

    from shiprisk.service import create_app

    with TestClient(create_app()) as client:
        yield client
