import numpy as np
import pytest

from bernstein_interp import conditions
from bernstein_interp.sequences import DiscreteSequence, lattice


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger numba compilation once so timed tests measure evaluation only."""
    tiny = DiscreteSequence.from_points([1j, 1 + 1j, 2 - 1j, 3 - 2j])
    conditions.poisson_balayage(tiny, [0.0, 1.0])
    conditions.carleson_pairwise(tiny)


@pytest.fixture
def lattice100():
    return lattice(imag_offset=1.0, spacing=1.0, half_width=100)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


# --- acceptance summary: one PASS/FAIL line per criterion -------------------

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    number, title = marker.args
    detail = getattr(item, "criterion_detail", "")
    if rep.failed and call.excinfo is not None:
        detail = f"{detail} | {call.excinfo.typename}: {call.excinfo.value}".strip(" |")
    item.config.stash[_ACCEPTANCE].append((number, title, rep.passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = sorted(config.stash.get(_ACCEPTANCE, []))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in rows:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail.splitlines()[0]}]"
        terminalreporter.write_line(line)
