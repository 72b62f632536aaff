import warnings

import pytest

from cqedgate.circuit import FluxRegimeWarning

ACCEPTANCE: dict = {}


def pytest_configure(config):
    warnings.simplefilter("ignore", FluxRegimeWarning)


@pytest.fixture
def record():
    """Store a one-line summary for an acceptance criterion."""
    def _record(criterion, text):
        ACCEPTANCE.setdefault(criterion, {})["detail"] = text
    return _record


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    ACCEPTANCE.setdefault(n, {})["outcome"] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        entry = ACCEPTANCE[n]
        status = "PASS" if entry.get("outcome") == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {entry.get('detail', '')}")
