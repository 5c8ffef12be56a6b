import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mmps.growth import solve_all  # noqa: E402
from mmps.model import MmpsSystem  # noqa: E402
from mmps.normalization import normalize, solution_at  # noqa: E402
from mmps.railway import REFERENCE_X_E1, build_model, default_params  # noqa: E402
from mmps.solvability import certify  # noqa: E402


@pytest.fixture(scope="session")
def railway():
    return build_model(default_params())


@pytest.fixture(scope="session")
def railway_growth(railway):
    return solve_all(railway)


@pytest.fixture(scope="session")
def railway_sol(railway, railway_growth):
    """The LP solution whose fixed-point set contains the uniform timetable."""
    return railway_growth.solutions[0]


@pytest.fixture(scope="session")
def railway_sol_e1(railway, railway_sol):
    return solution_at(railway, railway_sol.footprint, 120.0, REFERENCE_X_E1)


@pytest.fixture(scope="session")
def railway_ns(railway, railway_sol_e1):
    return normalize(railway, railway_sol_e1)


@pytest.fixture(scope="session")
def railway_cert(railway):
    return certify(railway)


@pytest.fixture
def identity2():
    """Two temporal states, each advancing by one per cycle, no coupling."""
    return MmpsSystem(A=np.eye(2) * 0 + np.array([[0.0, -np.inf], [-np.inf, 0.0]]),
                      B=np.array([[1.0, np.inf], [np.inf, 1.0]]),
                      C=np.eye(2), D=np.zeros((2, 2)))


# One PASS/FAIL line per acceptance criterion, echoed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_passed = rep.passed


@pytest.fixture
def criterion(request):
    """Records a summary line for the acceptance criterion named by the test's marker."""
    mark = request.node.get_closest_marker("criterion")
    number, title = mark.args
    notes: list[str] = []
    yield notes
    status = "PASS" if getattr(request.node, "call_passed", False) else "FAIL"
    line = f"criterion {number:>2} {status}: {title}"
    if notes:
        line += " | " + "; ".join(notes)
    print("\n" + line)
    ACCEPTANCE_LINES.append(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
