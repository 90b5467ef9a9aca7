"""Seeded graph matching: Frank-Wolfe, exact branch and bound, and the BILP."""

from .bilp import BilpModel, build_bilp, write_lp
from .exact import DEFAULT_MAX_M, MatchSizeError, completion_cost, exact_match
from .result import TIE_BREAK, MatchResult, is_matchable
from .sgm import is_doubly_stochastic, sgm_match

__all__ = [
    "BilpModel",
    "DEFAULT_MAX_M",
    "MatchResult",
    "MatchSizeError",
    "TIE_BREAK",
    "build_bilp",
    "completion_cost",
    "exact_match",
    "is_doubly_stochastic",
    "is_matchable",
    "sgm_match",
    "write_lp",
]
