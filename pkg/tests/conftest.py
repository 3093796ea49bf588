import math

import numpy as np
import pytest

from lindosc.core import corpus, random_density, std_params


@pytest.fixture(scope="session")
def params():
    return std_params()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def corpus40(params):
    return corpus(params, 40)


def random_state(dim, support=6, seed=0):
    return random_density(dim, support, np.random.default_rng(seed))


def random_interior(dim, guard, rng, hermitian=False):
    """Random complex operator supported on levels ``0 .. dim-1-guard``."""
    n = dim - guard
    A = np.zeros((dim, dim), dtype=complex)
    A[:n, :n] = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if hermitian:
        A = A + A.conj().T
    return A


LN2 = math.log(2.0)


# --- acceptance reporting -------------------------------------------------------------------
_CRITERIA = {}


@pytest.fixture
def measure(request):
    """Record ``name=value`` measurements shown next to the criterion's PASS/FAIL line."""

    def record(name, value):
        request.node.user_properties.append((name, value))
        return value

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        details = ", ".join(f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}" for k, v in item.user_properties)
        _CRITERIA[number] = (report.outcome == "passed", title, details)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA, key=lambda n: (int(n.rstrip("ab")), n)):
        ok, title, details = _CRITERIA[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title}"
        terminalreporter.write_line(line + (f" [{details}]" if details else ""))
