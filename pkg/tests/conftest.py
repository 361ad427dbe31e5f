import functools

import numpy as np
import pytest

from kratzer_info.kratzer import state_for
from kratzer_info.molparams import bundled_molecules, to_atomic_units
from kratzer_info.pspace import momentum_density_grid

MOLECULES = {r.name: to_atomic_units(r) for r in bundled_molecules()}


@functools.lru_cache(maxsize=None)
def cached_density(name, n, l):
    """Momentum density of (molecule, n, l), shared across the whole session."""
    return momentum_density_grid(state_for(MOLECULES[name], n, l))


def sample_radii(state, count=20):
    """``count`` radii spread over the bulk of the density, kept off the nodes."""
    peak = 2.0 * (state.beta + 1.0) / state.xi
    width = np.sqrt(state.beta + state.n + 1.0) / state.xi
    lo, hi = state.support
    a = max(lo, peak - (4 + state.n) * width)
    b = min(hi, peak + (4 + 2 * state.n) * width)
    rs = np.linspace(a, b, count)
    nodes = state.nodes
    if nodes.size:
        gap = float(np.min(np.diff(np.concatenate([[0.0], nodes]))))
        for i, r in enumerate(rs):
            d = nodes - r
            j = int(np.argmin(np.abs(d)))
            if abs(d[j]) < 0.05 * gap:
                rs[i] = nodes[j] + 0.1 * gap
    return rs


@pytest.fixture(scope="session")
def molecules():
    return MOLECULES


# acceptance reporting: one PASS/FAIL line per criterion test

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        ok = rep.passed
        prev = _CRITERIA.get(item.nodeid)
        _CRITERIA[item.nodeid] = (label, ok if prev is None else prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in sorted(_CRITERIA.values(), key=lambda v: v[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
