"""Alignment strength of a bijection between two graphs."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .graph import DimensionError, Graph, density, disagreements
from .model import ParamStats

__all__ = [
    "BRUTEFORCE_MAX_N",
    "UndefinedStrengthError",
    "alignment_strength",
    "expected_disagreement_rate",
    "mean_disagreements_bruteforce",
    "mean_disagreements_closed_form",
    "mean_disagreements_exact",
]

BRUTEFORCE_MAX_N = 8


class UndefinedStrengthError(ValueError):
    """Both graphs are edgeless, or both are complete."""


def _check_pair(g: Graph, h: Graph) -> None:
    if g.n != h.n:
        raise DimensionError(f"graphs have {g.n} and {h.n} vertices")
    if g.n < 2:
        raise ValueError("alignment strength needs n >= 2")


def mean_disagreements_exact(g: Graph, h: Graph) -> Fraction:
    """Average disagreements over all bijections, as an exact rational.

    An edge of ``g`` lands on a non-edge of ``h`` with probability
    ``(N - e_H) / N`` under a uniform bijection, and a non-edge lands on an
    edge with probability ``e_H / N``, where ``N = C(n, 2)``.
    """
    _check_pair(g, h)
    pairs = math.comb(g.n, 2)
    dg = Fraction(g.edge_count, pairs)
    dh = Fraction(h.edge_count, pairs)
    return pairs * (dg * (1 - dh) + (1 - dg) * dh)


def mean_disagreements_closed_form(g: Graph, h: Graph) -> float:
    """``C(n,2) * [dG (1 - dH) + (1 - dG) dH]`` in floating point."""
    _check_pair(g, h)
    dg, dh = density(g), density(h)
    return math.comb(g.n, 2) * (dg * (1.0 - dh) + (1.0 - dg) * dh)


def mean_disagreements_bruteforce(g: Graph, h: Graph) -> Fraction:
    """Literal average of ``d(G, H, phi)`` over all ``n!`` bijections (n <= 8)."""
    _check_pair(g, h)
    if g.n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force over n! bijections is capped at n={BRUTEFORCE_MAX_N}, got n={g.n}")
    perms = np.array(list(itertools.permutations(range(g.n))), dtype=np.intp)
    a = g.adjacency
    b = h.adjacency[perms[:, :, None], perms[:, None, :]]
    iu = np.triu_indices(g.n, 1)
    total = int((a[iu] != b[:, iu[0], iu[1]]).sum())
    return Fraction(total, math.factorial(g.n))


def alignment_strength(g: Graph, h: Graph, phi=None) -> float:
    """``1 - (d / C(n,2)) / (dG (1 - dH) + (1 - dG) dH)``; ``phi=None`` is the identity."""
    _check_pair(g, h)
    dg, dh = density(g), density(h)
    denom = dg * (1.0 - dh) + (1.0 - dg) * dh
    if denom == 0.0:
        raise UndefinedStrengthError("alignment strength is undefined (both graphs edgeless or both complete)")
    return 1.0 - (disagreements(g, h, phi) / math.comb(g.n, 2)) / denom


def expected_disagreement_rate(stats: ParamStats, rho_e: float) -> float:
    """Expected ``d(G, H, I) / C(n, 2)`` for a correlated Bernoulli pair."""
    return 2.0 * (1.0 - rho_e) * (stats.mu * (1.0 - stats.mu) - stats.sigma2)
