import numpy as np
import pytest

from rrap.model import SerialParallelProblem, benchmark_problem

KNOWN_OPTIMUM = (3, 4, 6, 4, 3, 2, 4, 5, 4, 2, 3, 4, 5, 4, 5)
KNOWN_OPTIMUM_R = 0.945613


@pytest.fixture(scope="session")
def rrap15() -> SerialParallelProblem:
    return benchmark_problem()


def random_instance(rng: np.random.Generator, n_max: int = 4) -> SerialParallelProblem:
    """Small instance: R in [0.5, 0.95], C, W in [1, 5], budgets in [sum, 3*sum]."""
    n = int(rng.integers(1, n_max + 1))
    r = rng.uniform(0.5, 0.95, n)
    c = rng.integers(1, 6, n)
    w = rng.integers(1, 6, n)
    cb = int(rng.integers(c.sum(), 3 * c.sum() + 1))
    wb = int(rng.integers(w.sum(), 3 * w.sum() + 1))
    return SerialParallelProblem.from_arrays(r, c, w, cb, wb, name="random")


# --- acceptance reporting: one line per criterion at the end of the run ---

_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        item.config.stash[_ACCEPTANCE][marker.args[0]] = status


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(results, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{results[label]}  {label}")
