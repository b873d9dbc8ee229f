"""Shared fixtures and the acceptance-suite summary hook."""

import numpy as np
import pytest

from stmtri.quad import QuadSpec

ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture(scope="session")
def spec() -> QuadSpec:
    return QuadSpec()


@pytest.fixture(scope="session")
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=20260810))


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" in report.nodeid and "criterion" in report.nodeid:
        ACCEPTANCE_RESULTS[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for nodeid in sorted(ACCEPTANCE_RESULTS):
        outcome = ACCEPTANCE_RESULTS[nodeid]
        name = nodeid.split("::")[-1]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
