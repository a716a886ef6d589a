from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from einstein_sp.geometry import FibrationSpec
from einstein_sp.solver import solve_einstein

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rationals(lo=-20, hi=20, max_den=12, nonzero=False):
    s = st.builds(Fraction, st.integers(lo, hi), st.integers(1, max_den))
    return s.filter(bool) if nonzero else s


def positive_rationals(max_num=40, max_den=12):
    return st.builds(Fraction, st.integers(1, max_num), st.integers(1, max_den))


# Expensive solves are shared by every test module that needs them.


@pytest.fixture(scope="session")
def wallach_111():
    return solve_einstein(FibrationSpec.wallach(1, 1, 1))


@pytest.fixture(scope="session")
def wallach_112():
    return solve_einstein(FibrationSpec.wallach(1, 1, 2))


@pytest.fixture(scope="session")
def flag_grid():
    out = {}
    for n in range(3, 9):
        for p in range(2, 3 * n // 4 + 1):
            out[(n, p)] = solve_einstein(FibrationSpec.flag(n, p))
    return out


# One summary line per acceptance criterion.

_CRITERIA: dict[int, bool] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    if report.when == "call" or report.failed:
        _CRITERIA[n] = _CRITERIA.get(n, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _CRITERIA[n] else 'FAIL'}")
