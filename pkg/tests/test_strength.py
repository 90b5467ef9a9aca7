import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphcorr.graph import Graph, disagreements
from graphcorr.model import ParamStats
from graphcorr.strength import (
    UndefinedStrengthError,
    alignment_strength,
    expected_disagreement_rate,
    mean_disagreements_bruteforce,
    mean_disagreements_closed_form,
    mean_disagreements_exact,
)

from conftest import random_graph


def test_mean_one_edge_each():
    g = Graph.from_edges(3, [(0, 1)])
    h = Graph.from_edges(3, [(1, 2)])
    assert mean_disagreements_bruteforce(g, h) == Fraction(4, 3)
    assert mean_disagreements_exact(g, h) == Fraction(4, 3)
    assert mean_disagreements_closed_form(g, h) == pytest.approx(4 / 3, rel=1e-12)


def test_mean_empty_and_complete(rng):
    h = random_graph(rng, 7)
    assert mean_disagreements_closed_form(Graph.empty(7), h) == pytest.approx(h.edge_count, rel=1e-12)
    assert mean_disagreements_closed_form(Graph.complete(6), Graph.complete(6)) == 0


def test_mean_single_pair():
    assert mean_disagreements_bruteforce(Graph.complete(2), Graph.empty(2)) == 1


def test_bruteforce_guard():
    with pytest.raises(ValueError, match="capped at n=8"):
        mean_disagreements_bruteforce(Graph.empty(9), Graph.empty(9))


@given(st.integers(2, 7), st.integers(0, 2**32 - 1), st.floats(0, 1), st.floats(0, 1))
def test_bruteforce_equals_closed_form(n, seed, pg, ph):
    rng = np.random.default_rng(seed)
    g, h = random_graph(rng, n, pg), random_graph(rng, n, ph)
    assert mean_disagreements_bruteforce(g, h) == mean_disagreements_exact(g, h)


def test_strength_examples():
    g = Graph.from_edges(3, [(0, 1)])
    assert alignment_strength(g, g) == 1.0
    assert alignment_strength(g, g, np.array([0, 2, 1])) == pytest.approx(-0.5, rel=1e-12)
    # g's edge {1,2} sent onto h's edge by (1 2 3) -> (2 3 1)
    h = Graph.from_edges(3, [(1, 2)])
    assert alignment_strength(g, h, np.array([1, 2, 0])) == 1.0


def test_strength_zero_at_average():
    # e_G = 2, e_H = 3 on n = 4: the bijection average is 3
    g = Graph.from_edges(4, [(0, 1), (1, 2)])
    h = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert mean_disagreements_exact(g, h) == 3
    assert disagreements(g, h) == 3
    assert alignment_strength(g, h) == pytest.approx(0.0, abs=1e-12)


def test_strength_undefined():
    with pytest.raises(UndefinedStrengthError):
        alignment_strength(Graph.empty(4), Graph.empty(4))
    with pytest.raises(UndefinedStrengthError):
        alignment_strength(Graph.complete(4), Graph.complete(4))


@given(st.integers(2, 30), st.integers(0, 2**32 - 1))
def test_strength_of_self_is_one(n, seed):
    g = random_graph(np.random.default_rng(seed), n)
    if 0 < g.edge_count < math.comb(n, 2):
        assert alignment_strength(g, g) == 1.0


@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_strength_matches_definition(n, seed):
    rng = np.random.default_rng(seed)
    g, h = random_graph(rng, n), random_graph(rng, n)
    mean = mean_disagreements_bruteforce(g, h)
    if mean == 0:
        return
    phi = rng.permutation(n)
    direct = 1 - Fraction(disagreements(g, h, phi)) / mean
    assert alignment_strength(g, h, phi) == pytest.approx(float(direct), rel=1e-12, abs=1e-12)


def test_expected_rate_examples():
    stats = ParamStats(mu=0.4, sigma2=0.08 / 3, rho_h=1 / 9, rho_T=7 / 15)
    assert expected_disagreement_rate(stats, 0.4) == pytest.approx(0.256, rel=1e-12)
    assert expected_disagreement_rate(stats, 1.0) == 0.0
    er = ParamStats(mu=0.3, sigma2=0.0, rho_h=0.0, rho_T=0.2)
    assert expected_disagreement_rate(er, 0.2) == pytest.approx(2 * 0.8 * 0.3 * 0.7, rel=1e-12)
