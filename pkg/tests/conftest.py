import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from graphcorr.graph import Graph, SeededPair
from graphcorr.model import ModelSpec, make_rng, sample_pair

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    upper = rng.random(n * (n - 1) // 2) < p
    return Graph.from_condensed(n, upper)


def correlated_pair(seed: int, n: int, s: int, rho_e: float = 0.5, p: float = 0.5) -> SeededPair:
    spec = ModelSpec(n=n, rho_e=rho_e, p=np.full(n * (n - 1) // 2, p))
    g, h = sample_pair(spec, make_rng(seed))
    return SeededPair(g, h, s)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS, key=lambda k: int(k)):
        terminalreporter.write_line(mod.RESULTS[key])
