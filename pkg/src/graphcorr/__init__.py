"""Correlated Bernoulli graph pairs, alignment strength and seeded graph matching."""

from .graph import Graph, SeededPair, density, disagreements, seed_split_disagreements
from .model import (
    ModelSpec,
    ParamStats,
    UniformFamilySpec,
    delta_for_rho_h,
    joint_edge_distribution,
    make_rng,
    param_stats,
    sample_pair,
    sample_uniform_family,
)
from .strength import (
    alignment_strength,
    expected_disagreement_rate,
    mean_disagreements_bruteforce,
    mean_disagreements_closed_form,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "ModelSpec",
    "ParamStats",
    "SeededPair",
    "UniformFamilySpec",
    "alignment_strength",
    "delta_for_rho_h",
    "density",
    "disagreements",
    "expected_disagreement_rate",
    "joint_edge_distribution",
    "make_rng",
    "mean_disagreements_bruteforce",
    "mean_disagreements_closed_form",
    "param_stats",
    "sample_pair",
    "sample_uniform_family",
    "seed_split_disagreements",
]
