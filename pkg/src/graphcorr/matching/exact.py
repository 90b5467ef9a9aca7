"""Exact seeded graph matching by depth-first branch and bound.

Ambiguous G-vertices are assigned in index order.  At a node that has fixed
``phi[0..k-1]`` the matrix ``L[r, c]`` holds, for every free pair, the
disagreements that sending ``r`` to ``c`` creates with the seeds and with the
already-assigned vertices, which from then on act as extra seeds.  A child
``k -> j`` costs ``L[k, j]`` more, and its bound adds the optimal assignment
value of ``L`` (updated for ``k -> j``) over the remaining rows and columns.
Disagreements among still-free vertices are bounded below by zero.

Among all optimal completions the lexicographically smallest is returned, so
the identity wins every tie it takes part in.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from ..assignment import _INT_INF, _hungarian
from ..graph import SeededPair, compose_seeded, disagreements, seed_split_disagreements
from .result import MatchResult, split_costs
from .sgm import sgm_match

__all__ = ["DEFAULT_MAX_M", "MatchSizeError", "completion_cost", "exact_match"]

DEFAULT_MAX_M = 14


class MatchSizeError(ValueError):
    """Too many ambiguous vertices for the exact matcher."""


def completion_cost(pair: SeededPair, phi_amb) -> int:
    """Seed-ambiguous plus ambiguous-ambiguous disagreements of ``phi_amb``."""
    _, d_sa, d_aa = seed_split_disagreements(pair, phi_amb)
    return d_sa + d_aa


def _lap_value(cost: np.ndarray) -> int:
    perm, _, _ = _hungarian(np.ascontiguousarray(cost), _INT_INF)
    return int(cost[np.arange(cost.shape[0]), perm].sum())


def exact_match(
    pair: SeededPair,
    use_sgm_incumbent: bool = True,
    max_m: int = DEFAULT_MAX_M,
    on_node: Callable[[tuple[int, ...], int], None] | None = None,
) -> MatchResult:
    """Global minimizer of disagreements with seeds held fixed.

    ``on_node(prefix, bound)`` is invoked for every bound that is computed,
    which lets tests audit admissibility.  ``bnb_nodes`` counts expanded
    nodes (root and leaves included); ``lap_calls`` counts assignment solves,
    those made by the incumbent heuristic included.
    """
    t0 = time.perf_counter()
    s, m = pair.s, pair.m
    if m > max_m:
        raise MatchSizeError(f"exact matching is capped at m={max_m} ambiguous vertices, got m={m}")
    if m == 0:
        obj = disagreements(pair.g, pair.h) if pair.n >= 2 else 0
        return MatchResult("exact", s, np.zeros(0, np.int64), obj, wall_time=time.perf_counter() - t0)

    seed_cost, a22, b22 = split_costs(pair)
    best_cost = np.iinfo(np.int64).max
    best_perm: tuple[int, ...] | None = None
    fw_iterations = 0
    lap_calls = 0
    if use_sgm_incumbent and m > 1:
        inc = sgm_match(pair)
        fw_iterations, lap_calls = inc.fw_iterations, inc.lap_calls
        best_perm = tuple(inc.phi_amb.tolist())
        best_cost = completion_cost(pair, inc.phi_amb)

    nodes = 0
    prefix: list[int] = []
    free = np.ones(m, dtype=bool)

    def search(k: int, acc: int, lmat: np.ndarray) -> None:
        nonlocal nodes, lap_calls, best_cost, best_perm
        nodes += 1
        if k == m:
            cand = tuple(prefix)
            if acc < best_cost or (acc == best_cost and (best_perm is None or cand < best_perm)):
                best_cost, best_perm = acc, cand
            return
        cols = np.flatnonzero(free)
        inc_cost = lmat[k, cols]
        rest = np.arange(k + 1, m)
        children = []
        for idx in np.lexsort((cols, inc_cost)):
            j = int(cols[idx])
            step = int(inc_cost[idx])
            if rest.size:
                keep = cols != j
                rc = cols[keep]
                sub = lmat[np.ix_(rest, rc)] + np.abs(a22[rest, k][:, None] - b22[rc, j][None, :])
                lb = _lap_value(sub)
                lap_calls += 1
                bound = acc + step + lb
            else:
                bound = acc + step
            if on_node is not None:
                on_node((*prefix, j), bound)
            children.append((j, step, bound))
        for j, step, bound in children:
            if bound > best_cost:
                continue
            if bound == best_cost and best_perm is not None and (*prefix, j) > best_perm[: k + 1]:
                continue
            child_l = lmat + np.abs(a22[:, k][:, None] - b22[:, j][None, :])
            prefix.append(j)
            free[j] = False
            search(k + 1, acc + step, child_l)
            free[j] = True
            prefix.pop()

    search(0, 0, seed_cost.copy())

    phi = np.array(best_perm, dtype=np.int64)
    obj = disagreements(pair.g, pair.h, compose_seeded(s, phi))
    return MatchResult(
        "exact",
        s,
        phi,
        obj,
        fw_iterations=fw_iterations,
        bnb_nodes=nodes,
        lap_calls=lap_calls,
        wall_time=time.perf_counter() - t0,
    )
