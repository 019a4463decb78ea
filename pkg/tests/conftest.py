import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orbiconv.basis import BasisSpec, enumerate_basis  # noqa: E402


@pytest.fixture(scope="session")
def small_basis():
    """120 modes; resolvable on grids of 48 and up."""
    return enumerate_basis(BasisSpec(12.0, 120))


@pytest.fixture(scope="session")
def default_basis():
    return enumerate_basis(BasisSpec(12.0, 2048))


_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and (rep.when == "call" or (rep.when == "setup" and not rep.passed)):
        _CRITERIA.append((mark.args[0], mark.args[1], rep.outcome.upper(), item.name))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, outcome, name in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {num:>2} {outcome:<6} {title} ({name})")
