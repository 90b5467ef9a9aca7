"""Exact dense linear assignment.

The kernel is the shortest-augmenting-path Hungarian method with row and
column potentials (O(m^3)).  Integer matrices run through an int64
specialization with exact arithmetic; real matrices use float64.

Tie-break: among all optimal permutations the lexicographically smallest one
is returned.  With optimal potentials every optimal assignment uses only
zero-reduced-cost ("tight") entries, so the optimum is made lexicographically
minimal by fixing rows in order to their smallest tight column that still
admits a perfect matching on the tight entries.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

__all__ = ["lap_lower_bound", "solve_lap_max", "solve_lap_min"]

_INT_INF = np.iinfo(np.int64).max // 4
# integer fast path only when sums cannot overflow int64
_INT_SAFE = 2**40


@njit(cache=True)
def _hungarian(cost, inf):
    m = cost.shape[0]
    u = np.zeros(m + 1, cost.dtype)
    v = np.zeros(m + 1, cost.dtype)
    owner = np.zeros(m + 1, np.int64)  # column -> row, 1-based, 0 = free
    way = np.zeros(m + 1, np.int64)
    minv = np.empty(m + 1, cost.dtype)
    used = np.empty(m + 1, np.bool_)
    for i in range(1, m + 1):
        owner[0] = i
        j0 = 0
        minv[:] = inf
        used[:] = False
        while True:
            used[j0] = True
            i0 = owner[j0]
            delta = inf
            j1 = 0
            for j in range(1, m + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while True:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
            if j0 == 0:
                break
    row_to_col = np.empty(m, np.int64)
    for j in range(1, m + 1):
        row_to_col[owner[j] - 1] = j - 1
    return row_to_col, u[1:].copy(), v[1:].copy()


@njit(cache=True)
def _reroute(tight, row_to_col, col_to_row, fixed_col, i, j):
    """Move row ``i`` onto column ``j`` keeping a perfect tight matching.

    Rows below ``i`` own the fixed columns and are never touched.  Returns
    False, leaving the matching unchanged, when no such matching exists.
    """
    m = tight.shape[0]
    i2 = col_to_row[j]
    j0 = row_to_col[i]
    parent_row = np.full(m, -1, np.int64)
    seen_col = fixed_col.copy()
    seen_col[j] = True
    queue = np.empty(m, np.int64)
    head = 0
    tail = 1
    queue[0] = i2
    found = -1
    while head < tail and found < 0:
        r = queue[head]
        head += 1
        for c in range(m):
            if seen_col[c] or not tight[r, c]:
                continue
            seen_col[c] = True
            parent_row[c] = r
            if c == j0:
                found = c
                break
            queue[tail] = col_to_row[c]
            tail += 1
    if found < 0:
        return False
    c = j0
    r = parent_row[c]
    while True:
        prev = row_to_col[r]
        row_to_col[r] = c
        col_to_row[c] = r
        if r == i2:
            break
        c = prev
        r = parent_row[c]
    row_to_col[i] = j
    col_to_row[j] = i
    return True


@njit(cache=True)
def _lex_smallest(tight, row_to_col):
    m = tight.shape[0]
    row_to_col = row_to_col.copy()
    col_to_row = np.empty(m, np.int64)
    for r in range(m):
        col_to_row[row_to_col[r]] = r
    fixed_col = np.zeros(m, np.bool_)
    for i in range(m):
        for j in range(m):
            if fixed_col[j] or not tight[i, j]:
                continue
            if row_to_col[i] == j:
                break
            if _reroute(tight, row_to_col, col_to_row, fixed_col, i, j):
                break
        fixed_col[row_to_col[i]] = True
    return row_to_col


def _prepare(matrix) -> np.ndarray:
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"assignment needs a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("assignment needs m >= 1")
    if a.dtype == bool:
        a = a.astype(np.int64)
    if not np.issubdtype(a.dtype, np.number) or np.iscomplexobj(a):
        raise ValueError("assignment needs a real matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("assignment matrix has non-finite entries")
    return a


def _as_exact_int(a: np.ndarray) -> np.ndarray | None:
    if np.issubdtype(a.dtype, np.integer):
        if np.abs(a).max() < _INT_SAFE:
            return a.astype(np.int64)
        return None
    if np.abs(a).max() < _INT_SAFE and np.all(a == np.round(a)):
        return a.astype(np.int64)
    return None


def _solve_min(cost: np.ndarray, lex: bool) -> np.ndarray:
    icost = _as_exact_int(cost)
    if icost is not None:
        perm, u, v = _hungarian(np.ascontiguousarray(icost), _INT_INF)
        if lex:
            tight = (icost - u[:, None] - v[None, :]) == 0
            perm = _lex_smallest(tight, perm)
        return perm
    fcost = np.ascontiguousarray(cost, dtype=np.float64)
    perm, u, v = _hungarian(fcost, np.inf)
    if lex:
        scale = max(1.0, float(np.abs(fcost).max()))
        tol = 1e-9 * scale
        tight = (fcost - u[:, None] - v[None, :]) <= tol
        # the matching found must itself count as tight
        tight[np.arange(fcost.shape[0]), perm] = True
        perm = _lex_smallest(tight, perm)
    return perm


def _total(a: np.ndarray, perm: np.ndarray):
    picked = a[np.arange(a.shape[0]), perm]
    if np.issubdtype(a.dtype, np.integer):
        return int(picked.sum())
    return math.fsum(picked.tolist())


def solve_lap_min(cost, lex: bool = True) -> tuple[np.ndarray, float]:
    """Permutation minimizing ``sum_i cost[i, perm[i]]`` and its value."""
    a = _prepare(cost)
    perm = _solve_min(a, lex)
    return perm, _total(a, perm)


def solve_lap_max(profit, lex: bool = True) -> tuple[np.ndarray, float]:
    """Permutation maximizing ``sum_i profit[i, perm[i]]`` and its value.

    Parameters
    ----------
    profit : array_like, shape (m, m)
        Finite real or integer entries.
    lex : bool
        Return the lexicographically smallest optimal permutation.  Turning
        it off skips the tie-break pass; the result is still optimal and
        deterministic.

    Returns
    -------
    perm : ndarray of int64
        ``perm[i]`` is the column assigned to row ``i``.
    total : int or float
        Exact for integer input.
    """
    a = _prepare(profit)
    perm = _solve_min(-a, lex)
    return perm, _total(a, perm)


def lap_lower_bound(residual) -> float:
    """Optimal assignment value of a residual cost matrix; 0 when it is empty.

    Any completion of a partial assignment pays at least this much when
    ``residual[r, c]`` lower-bounds the cost of sending free row ``r`` to
    free column ``c``.
    """
    a = np.asarray(residual)
    if a.size == 0:
        return 0
    a = _prepare(a)
    perm = _solve_min(a, lex=False)
    return _total(a, perm)
