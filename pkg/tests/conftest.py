from __future__ import annotations

import pytest

from drinfeld_torsion.case import build_case, default_rank2_lattice
from drinfeld_torsion.exactalg import parse_poly

_CASES = {}


def get_case(name: str):
    """Shared cases; building AGFs and torsion once keeps the suite fast."""
    if name not in _CASES:
        entry = {
            "carlitz-theta": ("theta", 2, {"module": "carlitz"}),
            "carlitz-deg2": ("theta^2+1", 1, {"module": "carlitz"}),
            "rank2-deg2": ("theta^2+1", 1, {"lattice": default_rank2_lattice}),
            "rank2-theta": ("theta", 1, {"lattice": default_rank2_lattice}),
        }[name]
        p, n, kw = entry
        _CASES[name] = build_case(3, parse_poly(p, 3), n, name=name, **kw)
    return _CASES[name]


@pytest.fixture(scope="session")
def carlitz_theta():
    return get_case("carlitz-theta")


@pytest.fixture(scope="session")
def carlitz_deg2():
    return get_case("carlitz-deg2")


@pytest.fixture(scope="session")
def rank2_deg2():
    return get_case("rank2-deg2")


@pytest.fixture(scope="session")
def rank2_theta():
    return get_case("rank2-theta")


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one line per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
