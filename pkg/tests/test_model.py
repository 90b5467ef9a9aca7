import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphcorr.model import (
    ModelSpec,
    UnattainableTargetError,
    UndefinedHeterogeneityError,
    UniformFamilySpec,
    delta_for_rho_h,
    derive_seed,
    format_model_spec,
    joint_edge_distribution,
    make_rng,
    param_stats,
    parse_model_spec,
    rho_h_ceiling,
    sample_pair,
    sample_uniform_family,
)


def _spec(n, rho_e, p):
    return ModelSpec(n=n, rho_e=rho_e, p=np.asarray(p, dtype=float))


# -- statistics ------------------------------------------------------------------


def test_stats_erdos_renyi():
    st_ = param_stats(_spec(6, 0.3, np.full(15, 0.5)))
    assert (st_.mu, st_.sigma2, st_.rho_h) == (0.5, 0.0, 0.0)
    assert st_.rho_T == pytest.approx(0.3, abs=1e-15)


def test_stats_three_parameters():
    st_ = param_stats(_spec(3, 0.4, [0.2, 0.4, 0.6]))
    assert st_.mu == pytest.approx(0.4, rel=1e-12)
    assert st_.sigma2 == pytest.approx(0.08 / 3, rel=1e-12)
    assert st_.rho_h == pytest.approx(1 / 9, rel=1e-12)
    assert st_.rho_T == pytest.approx(7 / 15, rel=1e-12)


def test_stats_zero_one_parameters():
    assert param_stats(_spec(4, 0.2, [0, 1, 1, 0, 1, 0])).rho_h == 1.0


@pytest.mark.parametrize("value", [0.0, 1.0])
def test_degenerate_parameters_rejected(value):
    with pytest.raises(UndefinedHeterogeneityError):
        _spec(4, 0.5, np.full(6, value))


@pytest.mark.parametrize("kwargs", [dict(rho_e=-0.1), dict(rho_e=1.1), dict(p=[0.5, 1.2, 0.1])])
def test_invalid_spec_rejected(kwargs):
    args = dict(n=3, rho_e=0.5, p=[0.5, 0.2, 0.1]) | kwargs
    with pytest.raises(ValueError):
        _spec(**args)


@given(st.integers(2, 25), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_heterogeneity_identity(n, rho_e, seed):
    p = np.random.default_rng(seed).random(math.comb(n, 2))
    p[0] = 0.5  # keep mu away from 0 and 1
    spec = _spec(n, rho_e, p)
    st_ = param_stats(spec)
    assert 0.0 <= st_.rho_h <= 1.0
    ident = np.sum(p - p * p) / (math.comb(n, 2) * st_.mu * (1 - st_.mu))
    assert 1.0 - st_.rho_h == pytest.approx(ident, rel=1e-12, abs=1e-12)
    assert 1.0 - st_.rho_T == pytest.approx((1.0 - spec.rho_e) * (1.0 - st_.rho_h), abs=1e-15)


# -- joint distribution ------------------------------------------------------------


def test_joint_distribution_examples():
    assert joint_edge_distribution(0.5, 0.4) == pytest.approx((0.35, 0.15, 0.15, 0.35), abs=1e-15)
    assert joint_edge_distribution(0.3, 1.0) == pytest.approx((0.3, 0.0, 0.0, 0.7), abs=1e-15)
    assert joint_edge_distribution(0.5, 0.0) == pytest.approx((0.25,) * 4, abs=1e-15)


@given(st.floats(0, 1), st.floats(0, 1))
def test_joint_distribution_properties(p, rho_e):
    p11, p10, p01, p00 = joint_edge_distribution(p, rho_e)
    assert min(p11, p10, p01, p00) >= -1e-15
    assert p11 + p10 + p01 + p00 == pytest.approx(1.0, abs=1e-12)
    assert p11 + p10 == pytest.approx(p, abs=1e-12)
    assert p11 + p01 == pytest.approx(p, abs=1e-12)
    assert p10 + p01 == pytest.approx(2 * (1 - rho_e) * p * (1 - p), abs=1e-12)


# -- sampling ----------------------------------------------------------------------


def test_full_correlation_gives_equal_graphs():
    spec = _spec(30, 1.0, np.random.default_rng(3).random(435))
    g, h = sample_pair(spec, make_rng(5))
    assert g == h


def test_all_ones_gives_complete_graphs():
    # an all-ones matrix is excluded from the model, so use one zero pair
    p = np.ones(36)
    p[-1] = 0.0
    g, h = sample_pair(_spec(9, 0.2, p), make_rng(1))
    assert g.edge_count == h.edge_count == 35


def test_joint_frequency_monte_carlo():
    spec = _spec(60, 0.4, np.full(math.comb(60, 2), 0.5))
    reps = 5000
    both = 0
    for r in range(reps):
        g, h = sample_pair(spec, make_rng(99, r))
        both += bool(g.adjacency[0, 1] and h.adjacency[0, 1])
    se = math.sqrt(0.35 * 0.65 / reps)
    assert abs(both / reps - 0.35) <= 3 * se


def test_sampling_is_deterministic():
    spec = _spec(40, 0.5, np.full(780, 0.4))
    assert sample_pair(spec, make_rng(11, 2)) == sample_pair(spec, make_rng(11, 2))
    assert sample_pair(spec, make_rng(11, 2)) != sample_pair(spec, make_rng(11, 3))


def test_stream_keys_are_distinct():
    seeds = {derive_seed(7), derive_seed(7, 0), derive_seed(7, 0, 0), derive_seed(7, 1, 0), derive_seed(7, 0, 1)}
    assert len(seeds) == 5
    with pytest.raises(ValueError):
        derive_seed(7, -1)


# -- uniform family ------------------------------------------------------------------


def test_delta_calibration():
    assert delta_for_rho_h(0.5, 1 / 12) == pytest.approx(0.25, rel=1e-12)
    assert delta_for_rho_h(0.5, 0.0) == 0.0
    assert rho_h_ceiling(0.5) == pytest.approx(1 / 3)
    assert delta_for_rho_h(0.5, rho_h_ceiling(0.5)) == 0.5
    with pytest.raises(UnattainableTargetError):
        delta_for_rho_h(0.5, 0.34)
    with pytest.raises(UnattainableTargetError):
        delta_for_rho_h(1 / 3, 0.2)  # ceiling is 1/6 here


@given(st.floats(0.01, 0.99), st.floats(0, 1))
def test_delta_stays_inside_unit_interval(p, frac):
    delta = delta_for_rho_h(p, frac * rho_h_ceiling(p))
    assert delta <= min(p, 1 - p)


@pytest.mark.slow
def test_realized_heterogeneity_concentrates():
    fam = UniformFamilySpec(n=2000, p_center=0.5, delta=delta_for_rho_h(0.5, 1 / 12), rho_e=0.0)
    close = sum(abs(param_stats(sample_uniform_family(fam, make_rng(4, r))).rho_h - 1 / 12) <= 0.01 for r in range(100))
    assert close >= 95


def test_uniform_family_support_and_mean():
    spec = sample_uniform_family(UniformFamilySpec(200, 0.5, 0.0, 0.3), make_rng(0))
    assert np.all(spec.p == 0.5)
    spec = sample_uniform_family(UniformFamilySpec(300, 0.5, 0.25, 0.3), make_rng(1))
    se = 0.5 / math.sqrt(3) / math.sqrt(spec.p.size)
    assert abs(spec.p.mean() - 0.5) <= 3 * se
    spec = sample_uniform_family(UniformFamilySpec(200, 1 / 3, 1 / 6, 0.3), make_rng(2))
    assert spec.p.min() > 1 / 6 and spec.p.max() < 1 / 2


def test_uniform_family_validation():
    with pytest.raises(ValueError):
        UniformFamilySpec(10, 0.3, 0.31, 0.0)
    with pytest.raises(ValueError):
        UniformFamilySpec(10, 0.0, 0.0, 0.0)


# -- serialization -------------------------------------------------------------------


def test_model_spec_roundtrip():
    spec = _spec(7, 0.37, np.random.default_rng(8).random(21))
    text = format_model_spec(spec)
    back = parse_model_spec(text)
    assert back.n == 7 and back.rho_e == 0.37
    assert np.array_equal(back.p, spec.p)
    assert text.splitlines()[:3] == ["n 7", "rho_e 0.37", "p"]


@pytest.mark.parametrize("text", ["n 3\nrho_e 0.5\n", "n 3\np\n0.1 0.2\n0.3\n", "n 3\nrho_e 0.5\np\n0.1\n0.3\n"])
def test_model_spec_parse_errors(text):
    with pytest.raises(ValueError):
        parse_model_spec(text)
