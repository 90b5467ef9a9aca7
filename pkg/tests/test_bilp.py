import itertools
import re

import numpy as np
from hypothesis import given, strategies as st

from graphcorr.graph import SeededPair, seed_split_disagreements
from graphcorr.matching import build_bilp, exact_match, write_lp

from conftest import correlated_pair, random_graph


def perm_matrix(phi):
    m = len(phi)
    p = np.zeros((m, m), dtype=np.int64)
    p[np.arange(m), phi] = 1
    return p


def test_full_scale_variable_count():
    g = random_graph(np.random.default_rng(0), 500, 0.1)
    model = build_bilp(SeededPair(g, g, 480))
    assert model.n_vars == 3 * 20**2 + 4 * 20 * 480 == 39600
    assert model.constraint_matrix().shape == (model.n_rows, model.n_vars)


def test_block_shapes_and_rhs():
    pair = correlated_pair(1, 7, 3)
    m, s = 4, 3
    model = build_bilp(pair)
    rows = m * m + 2 * m * s + 2 * m
    assert model.M.shape == (rows, m * m)
    assert model.E.shape == (rows, 2 * m * m + 4 * m * s)
    (_, _, a21, _), (_, b12, _, _) = pair.blocks()
    k = m * m
    assert np.array_equal(model.b[:k], np.zeros(k))
    assert np.array_equal(model.b[k : k + m * s], b12.reshape(-1, order="F"))
    assert np.array_equal(model.b[k + m * s : k + 2 * m * s], a21.reshape(-1, order="F"))
    assert np.all(model.b[-2 * m :] == 1)
    assert np.all(model.c[:k] == 0) and np.all(model.c[k:] == 1)


def test_M_applies_the_block_maps(rng):
    pair = SeededPair(random_graph(rng, 9), random_graph(rng, 9), 4)
    model = build_bilp(pair)
    (_, a12, a21, a22), (_, b12, b21, b22) = pair.blocks()
    p = rng.integers(0, 3, (5, 5))
    got = model.M @ p.reshape(-1, order="F")
    want = np.concatenate(
        [
            (a22 @ p - p @ b22).reshape(-1, order="F"),
            (a12 @ p).reshape(-1, order="F"),
            (p @ b21).reshape(-1, order="F"),
            p.sum(axis=0),
            p.sum(axis=1),
        ]
    )
    assert np.array_equal(got, want)


def test_identity_on_isomorphic_pair():
    pair = correlated_pair(2, 9, 4, rho_e=1.0)
    model = build_bilp(pair)
    x = model.encode(np.eye(5, dtype=np.int64))
    assert model.is_feasible(x)
    assert not x[25:].any() and model.objective(x) == 0


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 4))
def test_encoding_objective_is_twice_completion_cost(seed, m, s):
    pair = correlated_pair(seed, m + s, s, rho_e=0.3)
    model = build_bilp(pair)
    phi = np.random.default_rng(seed).permutation(m)
    x = model.encode(perm_matrix(phi))
    _, d_sa, d_aa = seed_split_disagreements(pair, phi)
    assert model.is_feasible(x)
    assert model.objective(x) == 2 * (d_sa + d_aa)


def test_exact_result_matches_bilp_objective():
    pair = correlated_pair(5, 10, 4, rho_e=0.2)
    res = exact_match(pair)
    d_ss = seed_split_disagreements(pair)[0]
    model = build_bilp(pair)
    assert model.objective(model.encode(perm_matrix(res.phi_amb))) == 2 * (res.objective - d_ss)


def test_only_permutations_are_feasible_at_m3():
    pair = correlated_pair(7, 6, 3, rho_e=0.5)
    model = build_bilp(pair)
    feasible = []
    for bits in itertools.product((0, 1), repeat=9):
        p = np.array(bits).reshape(3, 3)
        if model.p_block_feasible(p):
            feasible.append(p)
    perms = {tuple(perm_matrix(phi).ravel()) for phi in itertools.permutations(range(3))}
    assert len(feasible) == 6
    assert {tuple(p.ravel()) for p in feasible} == perms


def test_infeasible_x_detected():
    pair = correlated_pair(3, 6, 3)
    model = build_bilp(pair)
    x = model.encode(np.eye(3, dtype=np.int64))
    x[0] = 0
    assert not model.is_feasible(x)
    assert not model.is_feasible(x[:-1])


def _evaluate_lp(text, values):
    body = text.split("Subject To")[1].split("Binary")[0]
    rows = re.split(r"\n (?=c\d+:)", body.strip())
    checked = 0
    for row in rows:
        expr, rhs = row.split(":", 1)[1].rsplit("=", 1)
        toks = expr.split()
        total, sign, coef = 0, 1, 1
        for t in toks:
            if t in "+-":
                sign = -1 if t == "-" else 1
            elif t.isdigit():
                coef = int(t)
            else:
                total += sign * coef * values.get(t, 0)
                sign, coef = 1, 1
        assert total == int(rhs)
        checked += 1
    return checked


def test_lp_export_round_trips_a_feasible_point(tmp_path):
    pair = correlated_pair(11, 7, 3, rho_e=0.4)
    model = build_bilp(pair)
    phi = np.array([2, 0, 3, 1])
    x = model.encode(perm_matrix(phi))
    path = tmp_path / "m.lp"
    write_lp(model, path)
    text = path.read_text()
    assert text.splitlines()[1] == "Minimize" and text.rstrip().endswith("End")
    names = " ".join(text.split("Binary")[1].split("End")[0].split()).split()
    assert len(names) == model.n_vars
    values = dict(zip(names, x.tolist()))
    assert _evaluate_lp(text, values) == model.n_rows
