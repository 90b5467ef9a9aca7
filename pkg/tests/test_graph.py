import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphcorr.graph import (
    DimensionError,
    EdgeListError,
    Graph,
    SeededPair,
    check_permutation,
    density,
    disagreements,
    format_edge_list,
    identity,
    invert,
    parse_edge_list,
    read_permutation,
    seed_split_disagreements,
    write_permutation,
)

from conftest import random_graph


def _path3(edge):
    return Graph.from_edges(3, [edge])


def test_disagreements_identical_graphs():
    g = _path3((0, 1))
    assert disagreements(g, g, identity(3)) == 0


def test_disagreements_hand_count():
    assert disagreements(_path3((0, 1)), _path3((0, 2))) == 2


def test_disagreements_under_transposition():
    # (1)(2 3) sends {1,2} to {1,3}
    assert disagreements(_path3((0, 1)), _path3((0, 2)), np.array([0, 2, 1])) == 0


def test_disagreements_size_mismatch():
    with pytest.raises(DimensionError):
        disagreements(Graph.empty(3), Graph.empty(4))
    with pytest.raises(DimensionError):
        disagreements(Graph.empty(3), Graph.empty(3), np.arange(4))


def test_densities():
    assert density(Graph.empty(5)) == 0
    assert density(Graph.complete(5)) == 1
    assert density(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])) == 0.5
    with pytest.raises(ValueError):
        density(Graph.empty(1))


def test_graph_invariants(rng):
    g = random_graph(rng, 13)
    a = g.adjacency
    assert not a.diagonal().any()
    assert np.array_equal(a, a.T)
    assert g.edge_count == int(a.sum()) // 2 == len(g.edges())
    with pytest.raises(ValueError):
        a[0, 1] = True  # immutable


def test_from_adjacency_rejects_bad_input():
    bad = np.zeros((3, 3), bool)
    bad[0, 0] = True
    with pytest.raises(ValueError):
        Graph.from_adjacency(bad)
    asym = np.zeros((3, 3), bool)
    asym[0, 1] = True
    with pytest.raises(ValueError):
        Graph.from_adjacency(asym)


def test_permutation_checks():
    with pytest.raises(ValueError):
        check_permutation([0, 0, 1])
    with pytest.raises(DimensionError):
        check_permutation([0, 1], n=3)
    phi = np.array([2, 0, 1])
    assert np.array_equal(phi[invert(phi)], identity(3))


@given(st.integers(2, 16), st.integers(0, 2**32 - 1))
def test_disagreement_symmetry_under_inverse(n, seed):
    rng = np.random.default_rng(seed)
    g, h = random_graph(rng, n), random_graph(rng, n, 0.3)
    phi = rng.permutation(n)
    assert disagreements(g, h, phi) == disagreements(h, g, invert(phi))


@given(st.integers(2, 20), st.integers(0, 2**32 - 1))
def test_self_and_complement(n, seed):
    g = random_graph(np.random.default_rng(seed), n)
    assert disagreements(g, g) == 0
    assert disagreements(g, g.complement()) == math.comb(n, 2)


@given(st.integers(2, 12), st.data())
def test_seed_split_sums_to_total(n, data):
    s = data.draw(st.integers(0, n))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    pair = SeededPair(random_graph(rng, n), random_graph(rng, n), s)
    phi_amb = rng.permutation(n - s)
    d_ss, d_sa, d_aa = seed_split_disagreements(pair, phi_amb)
    full = np.concatenate([np.arange(s), s + phi_amb])
    assert d_ss + d_sa + d_aa == disagreements(pair.g, pair.h, full)
    assert d_ss == seed_split_disagreements(pair, rng.permutation(n - s))[0]


def test_seed_split_extremes(rng):
    g, h = random_graph(rng, 6), random_graph(rng, 6)
    assert seed_split_disagreements(SeededPair(g, h, 6)) == (disagreements(g, h), 0, 0)
    phi = rng.permutation(6)
    assert seed_split_disagreements(SeededPair(g, h, 0), phi) == (0, 0, disagreements(g, h, phi))


def test_seeded_pair_validation(rng):
    with pytest.raises(DimensionError):
        SeededPair(Graph.empty(3), Graph.empty(4), 1)
    with pytest.raises(ValueError):
        SeededPair(Graph.empty(3), Graph.empty(3), 4)


@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_edge_list_roundtrip(n, seed):
    g = random_graph(np.random.default_rng(seed), n, 0.4)
    text = format_edge_list(g)
    assert text.splitlines()[0] == f"n {n}"
    assert parse_edge_list(text) == g


@pytest.mark.parametrize(
    "text",
    [
        "n 3\n1 1\n",  # self-loop
        "n 3\n1 2\n1 2\n",  # duplicate
        "n 3\n2 1\n",  # i > j
        "n 3\n1 4\n",  # out of range
        "1 2\n",  # missing header
        "n 3\n1 x\n",
    ],
)
def test_edge_list_rejects(text):
    with pytest.raises(EdgeListError):
        parse_edge_list(text)


def test_edge_list_is_one_based():
    g = parse_edge_list("# comment\nn 3\n1 2\n")
    assert g.edges() == [(0, 1)]


def test_permutation_file_roundtrip(tmp_path):
    phi = np.array([2, 0, 1, 3])
    path = tmp_path / "perm.txt"
    write_permutation(phi, path)
    assert path.read_text().split() == ["3", "1", "2", "4"]
    assert np.array_equal(read_permutation(path, 4), phi)
