"""Frank-Wolfe seeded graph matching.

Maximizes the relaxed agreement

    f(D) = <D, A12' B12> + <D, A21 B21'> + <D, A22' D B22>

over doubly stochastic ``D``; at a permutation matrix, ``f`` counts ordered
agreeing edges, so maximizing it minimizes disagreements.  Each step moves
toward the permutation maximizing the linearization (an assignment solve) by
the exact maximizer of the quadratic ``f(D + a (Q - D))`` over ``a in [0, 1]``.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from ..assignment import solve_lap_max
from ..graph import SeededPair, compose_seeded, disagreements, identity
from .result import MatchResult

__all__ = ["is_doubly_stochastic", "sgm_match"]


def is_doubly_stochastic(d: np.ndarray, tol: float = 1e-9) -> bool:
    d = np.asarray(d)
    return bool(
        d.ndim == 2
        and d.shape[0] == d.shape[1]
        and np.all(d >= -tol)
        and np.all(np.abs(d.sum(axis=0) - 1.0) <= tol)
        and np.all(np.abs(d.sum(axis=1) - 1.0) <= tol)
    )


def sgm_match(
    pair: SeededPair,
    max_iter: int = 30,
    tol: float = 1e-6,
    init: str | np.ndarray = "barycenter",
    callback: Callable[[int, np.ndarray, float], None] | None = None,
) -> MatchResult:
    """Approximate seeded graph matching.

    Parameters
    ----------
    pair : SeededPair
        Seeds are vertices ``0..s-1`` in both graphs.
    max_iter : int
        Frank-Wolfe iteration cap.
    tol : float
        Stop once a step improves ``f`` by less than ``tol * max(|f|, 1)``.
    init : "barycenter" or ndarray
        Starting doubly stochastic matrix; the barycenter is ``J / m``.
    callback : callable, optional
        Called as ``callback(iteration, D, f)`` after the start point and
        after every step.

    Returns
    -------
    MatchResult
        The assignment-rounded iterate and its disagreement count.
    """
    t0 = time.perf_counter()
    s, m = pair.s, pair.m
    if m < 1:
        raise ValueError("sgm_match needs at least one ambiguous vertex")
    if max_iter < 1 or tol <= 0:
        raise ValueError("max_iter must be >= 1 and tol > 0")
    if m == 1:
        phi = identity(1)
        obj = disagreements(pair.g, pair.h, compose_seeded(s, phi)) if pair.n >= 2 else 0
        return MatchResult("sgm", s, phi, obj, wall_time=time.perf_counter() - t0)

    (_, a12, a21, a22), (_, b12, b21, b22) = pair.blocks(np.float64)
    lin = a12.T @ b12 + a21 @ b21.T
    a22t = a22.T

    if isinstance(init, str):
        if init != "barycenter":
            raise ValueError(f"unknown init {init!r}")
        d = np.full((m, m), 1.0 / m)
    else:
        d = np.array(init, dtype=np.float64)
        if d.shape != (m, m) or not is_doubly_stochastic(d):
            raise ValueError("init must be an m x m doubly stochastic matrix")

    quad = a22t @ d @ b22
    f = float(np.sum(d * lin) + np.sum(d * quad))
    if callback is not None:
        callback(0, d, f)

    lap_calls = 0
    it = 0
    for it in range(1, max_iter + 1):
        grad = lin + a22 @ d @ b22.T + quad
        cols, _ = solve_lap_max(grad)
        lap_calls += 1
        r = -d
        r[np.arange(m), cols] += 1.0
        slope = float(np.sum(r * grad))
        r_quad = a22t @ r @ b22
        curv = float(np.sum(r * r_quad))
        if curv < 0.0:
            alpha = min(1.0, max(0.0, -slope / (2.0 * curv)))
        else:
            alpha = 1.0 if slope + curv > 0.0 else 0.0
        gain = alpha * slope + alpha * alpha * curv
        if alpha > 0.0:
            d = d + alpha * r
            quad = quad + alpha * r_quad
            f += gain
        if callback is not None:
            callback(it, d, f)
        if gain < tol * max(abs(f), 1.0):
            break

    phi, _ = solve_lap_max(d)
    lap_calls += 1
    obj = disagreements(pair.g, pair.h, compose_seeded(s, phi))
    return MatchResult(
        "sgm",
        s,
        phi,
        obj,
        fw_iterations=it,
        lap_calls=lap_calls,
        wall_time=time.perf_counter() - t0,
    )
