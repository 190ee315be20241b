import pytest

from psdrank.exactalg import Matrix
from psdrank.fixtures import paper_matrix

_criteria = {}


@pytest.fixture(scope="session")
def M():
    return paper_matrix()


@pytest.fixture
def mat():
    return Matrix.from_rows


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_criteria.items()):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}")
