from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import SeededPair, compose_seeded

TIE_BREAK = "lexicographic-min"


@dataclass(frozen=True)
class MatchResult:
    """Outcome of a seeded matcher.

    ``phi_amb[i] = j`` sends ambiguous vertex ``s + i`` of G to ambiguous
    vertex ``s + j`` of H (0-based).  ``objective`` is the total number of
    disagreements of the extended bijection, seed-seed pairs included.
    """

    method: str
    s: int
    phi_amb: np.ndarray
    objective: int
    fw_iterations: int = 0
    bnb_nodes: int = 0
    lap_calls: int = 0
    wall_time: float = 0.0
    tie_break: str = TIE_BREAK

    @property
    def phi(self) -> np.ndarray:
        """The full bijection, identity on seeds."""
        return compose_seeded(self.s, self.phi_amb)

    @property
    def m(self) -> int:
        return int(self.phi_amb.size)


def is_matchable(result: MatchResult) -> bool:
    """True iff the matcher returned the identity on the ambiguous block."""
    return bool(np.array_equal(result.phi_amb, np.arange(result.phi_amb.size)))


def split_costs(pair: SeededPair):
    """Integer ingredients shared by the matchers.

    Returns ``(seed_cost, A22, B22)`` where ``seed_cost[i, j]`` counts seed
    vertices adjacent to exactly one of G-vertex ``s+i`` and H-vertex ``s+j``.
    """
    (_, _, a21, a22), (_, _, b21, b22) = pair.blocks(np.int64)
    seed_cost = a21 @ (1 - b21).T + (1 - a21) @ b21.T
    return seed_cost, a22, b22
