"""Replicated experiments over correlated Bernoulli pairs.

Every replicate is an independent task whose random stream is keyed by
``(master_seed, cell_id, replicate)`` (see :func:`graphcorr.model.make_rng`),
so results do not depend on how tasks are spread over worker processes.
Records come back in task order.
"""

from __future__ import annotations

import csv
import logging
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from os import PathLike
from typing import Iterable, Sequence

import numpy as np

from .graph import SeededPair, density, disagreements
from .matching import DEFAULT_MAX_M, TIE_BREAK, MatchSizeError, exact_match, is_matchable, sgm_match
from .model import (
    UnattainableTargetError,
    UniformFamilySpec,
    delta_for_rho_h,
    derive_seed,
    make_rng,
    param_stats,
    rho_h_ceiling,
    sample_pair,
    sample_uniform_family,
)
from .strength import UndefinedStrengthError, alignment_strength

log = logging.getLogger(__name__)

__all__ = [
    "CSV_COLUMNS",
    "CellResult",
    "GridSpec",
    "LevelSet",
    "ReplicateRecord",
    "SUMMARY_COLUMNS",
    "classify",
    "default_threads",
    "estimate_transition_level",
    "level_set_curve",
    "level_set_pairs",
    "run_convergence",
    "run_matchability_grid",
    "run_runtime_levelsets",
    "summarize",
    "write_records_csv",
    "write_summary_csv",
    "read_records_csv",
    "read_summary_csv",
    "cells_from_summary",
]

CSV_COLUMNS = (
    "experiment",
    "cell_id",
    "replicate",
    "rho_e",
    "rho_h_target",
    "rho_h_realized",
    "rho_T_realized",
    "p_center",
    "n",
    "s",
    "m",
    "matched",
    "objective",
    "d_identity",
    "strength_identity",
    "bnb_nodes",
    "lap_calls",
    "fw_iterations",
    "wall_time_s",
    "seed",
)

SUMMARY_COLUMNS = (
    "experiment",
    "cell_id",
    "rho_e",
    "rho_h_target",
    "rho_h_realized_mean",
    "rho_T_target",
    "rho_T_realized_mean",
    "replicates",
    "matched_count",
    "classification",
    "mean_bnb_nodes",
    "median_bnb_nodes",
    "geomean_bnb_nodes",
    "mean_lap_calls",
    "mean_fw_iterations",
    "tie_break",
)


def default_threads() -> int:
    env = os.environ.get("ALIGN_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# -- records ----------------------------------------------------------------


@dataclass(frozen=True)
class ReplicateRecord:
    experiment: str
    cell_id: int
    replicate: int
    rho_e: float
    rho_h_target: float
    rho_h_realized: float
    rho_T_realized: float
    p_center: float
    n: int
    s: int
    m: int
    matched: bool | None
    objective: int | None
    d_identity: int
    strength_identity: float
    bnb_nodes: int | None
    lap_calls: int | None
    fw_iterations: int | None
    wall_time_s: float | None
    seed: int
    # not written to the replicate CSV
    mu: float = field(default=math.nan, compare=False)
    sigma2: float = field(default=math.nan, compare=False)
    density_g: float = field(default=math.nan, compare=False)
    density_h: float = field(default=math.nan, compare=False)

    @property
    def disagreement_rate(self) -> float:
        return self.d_identity / math.comb(self.n, 2)


@dataclass(frozen=True)
class _Task:
    experiment: str
    cell_id: int
    replicate: int
    rho_e: float
    rho_h_target: float
    p_center: float
    n: int
    s: int
    delta: float
    seed: int
    matcher: str | None
    timing: bool


def _run_task(task: _Task) -> ReplicateRecord:
    rng = make_rng(task.seed)
    family = UniformFamilySpec(n=task.n, p_center=task.p_center, delta=task.delta, rho_e=task.rho_e)
    spec = sample_uniform_family(family, rng)
    stats = param_stats(spec)
    g, h = sample_pair(spec, rng)
    d_id = disagreements(g, h)
    try:
        str_id = alignment_strength(g, h)
    except UndefinedStrengthError:
        str_id = math.nan
    matched = objective = nodes = laps = iters = wall = None
    if task.matcher is not None:
        pair = SeededPair(g, h, task.s)
        if task.matcher == "sgm":
            res = sgm_match(pair)
        else:
            res = exact_match(pair)
        matched = is_matchable(res)
        objective = res.objective
        nodes, laps, iters = res.bnb_nodes, res.lap_calls, res.fw_iterations
        wall = res.wall_time if task.timing else None
    return ReplicateRecord(
        experiment=task.experiment,
        cell_id=task.cell_id,
        replicate=task.replicate,
        rho_e=task.rho_e,
        rho_h_target=task.rho_h_target,
        rho_h_realized=stats.rho_h,
        rho_T_realized=stats.rho_T,
        p_center=task.p_center,
        n=task.n,
        s=task.s,
        m=task.n - task.s,
        matched=matched,
        objective=objective,
        d_identity=d_id,
        strength_identity=str_id,
        bnb_nodes=nodes,
        lap_calls=laps,
        fw_iterations=iters,
        wall_time_s=wall,
        seed=task.seed,
        mu=stats.mu,
        sigma2=stats.sigma2,
        density_g=density(g),
        density_h=density(h),
    )


def _map(tasks: Sequence[_Task], threads: int | None) -> list[ReplicateRecord]:
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (threads * 8))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_task, tasks, chunksize=chunk))


# -- classification and summaries --------------------------------------------


def classify(matched_count: int, replicates: int) -> str:
    """green: no failures; yellow: failure rate at most 5/60; red otherwise."""
    if replicates < 1 or not 0 <= matched_count <= replicates:
        raise ValueError("need 0 <= matched_count <= replicates and replicates >= 1")
    failures = replicates - matched_count
    if failures == 0:
        return "green"
    if Fraction(failures, replicates) <= Fraction(5, 60):
        return "yellow"
    return "red"


@dataclass(frozen=True)
class CellResult:
    experiment: str
    cell_id: int
    rho_e: float
    rho_h_target: float
    rho_h_realized_mean: float
    rho_T_target: float
    rho_T: float
    replicates: int
    matched_count: int
    classification: str
    mean_bnb_nodes: float = math.nan
    median_bnb_nodes: float = math.nan
    geomean_bnb_nodes: float = math.nan
    mean_lap_calls: float = math.nan
    mean_fw_iterations: float = math.nan

    @property
    def match_rate(self) -> float:
        return self.matched_count / self.replicates if self.replicates else math.nan

    @property
    def valid(self) -> bool:
        return self.classification != "invalid"


@dataclass(frozen=True)
class _CellPlan:
    cell_id: int
    rho_e: float
    rho_h: float
    delta: float | None


def _summarize_cell(experiment: str, plan: _CellPlan, recs: list[ReplicateRecord]) -> CellResult:
    target_T = 1.0 - (1.0 - plan.rho_e) * (1.0 - plan.rho_h)
    if plan.delta is None:
        return CellResult(experiment, plan.cell_id, plan.rho_e, plan.rho_h, math.nan, target_T, math.nan, 0, 0, "invalid")
    matched = sum(bool(r.matched) for r in recs)
    nodes = [r.bnb_nodes for r in recs if r.bnb_nodes]
    laps = [r.lap_calls for r in recs if r.lap_calls is not None]
    iters = [r.fw_iterations for r in recs if r.fw_iterations is not None]
    return CellResult(
        experiment=experiment,
        cell_id=plan.cell_id,
        rho_e=plan.rho_e,
        rho_h_target=plan.rho_h,
        rho_h_realized_mean=statistics.fmean(r.rho_h_realized for r in recs),
        rho_T_target=target_T,
        rho_T=statistics.fmean(r.rho_T_realized for r in recs),
        replicates=len(recs),
        matched_count=matched,
        classification=classify(matched, len(recs)),
        mean_bnb_nodes=statistics.fmean(nodes) if nodes else math.nan,
        median_bnb_nodes=float(statistics.median(nodes)) if nodes else math.nan,
        geomean_bnb_nodes=statistics.geometric_mean(nodes) if nodes else math.nan,
        mean_lap_calls=statistics.fmean(laps) if laps else math.nan,
        mean_fw_iterations=statistics.fmean(iters) if iters else math.nan,
    )


def summarize(records: Iterable[ReplicateRecord]) -> list[CellResult]:
    """Per-cell summaries of already-computed replicate records."""
    by_cell: dict[int, list[ReplicateRecord]] = {}
    for r in records:
        by_cell.setdefault(r.cell_id, []).append(r)
    out = []
    for cid in sorted(by_cell):
        recs = by_cell[cid]
        first = recs[0]
        plan = _CellPlan(cid, first.rho_e, first.rho_h_target, 0.0)
        out.append(_summarize_cell(first.experiment, plan, recs))
    return out


def _plan_cells(pairs: Iterable[tuple[float, float]], p_center: float) -> list[_CellPlan]:
    plans = []
    for cid, (rho_e, rho_h) in enumerate(pairs):
        try:
            delta = delta_for_rho_h(p_center, rho_h)
        except UnattainableTargetError as exc:
            log.warning("cell %d skipped: %s", cid, exc)
            delta = None
        plans.append(_CellPlan(cid, float(rho_e), float(rho_h), delta))
    return plans


def _tasks(experiment, plans, p_center, n, s, replicates, seed, matcher, timing) -> list[_Task]:
    tasks = []
    for plan in plans:
        if plan.delta is None:
            continue
        for r in range(replicates):
            tasks.append(
                _Task(
                    experiment=experiment,
                    cell_id=plan.cell_id,
                    replicate=r,
                    rho_e=plan.rho_e,
                    rho_h_target=plan.rho_h,
                    p_center=float(p_center),
                    n=n,
                    s=s,
                    delta=plan.delta,
                    seed=derive_seed(seed, plan.cell_id, r),
                    matcher=matcher,
                    timing=timing,
                )
            )
    return tasks


def _run_cells(experiment, plans, p_center, n, s, replicates, seed, matcher, threads, timing):
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    records = _map(_tasks(experiment, plans, p_center, n, s, replicates, seed, matcher, timing), threads)
    by_cell: dict[int, list[ReplicateRecord]] = {}
    for rec in records:
        by_cell.setdefault(rec.cell_id, []).append(rec)
    cells = [_summarize_cell(experiment, plan, by_cell.get(plan.cell_id, [])) for plan in plans]
    return records, cells


# -- experiment families -----------------------------------------------------


def run_convergence(
    n: int,
    p_center: float,
    delta: float,
    rho_e: float,
    replicates: int,
    seed: int,
    threads: int | None = 1,
) -> list[ReplicateRecord]:
    """Identity-alignment statistics for replicated pairs from one family."""
    UniformFamilySpec(n=n, p_center=p_center, delta=delta, rho_e=rho_e)
    limit_rho_h = delta**2 / (3.0 * p_center * (1.0 - p_center))
    plan = _CellPlan(0, float(rho_e), limit_rho_h, float(delta))
    records, _ = _run_cells("convergence", [plan], p_center, n, 0, replicates, seed, None, threads, False)
    return records


@dataclass(frozen=True)
class GridSpec:
    rho_e_values: tuple[float, ...]
    rho_h_values: tuple[float, ...]
    p_center: float
    n: int
    s: int
    replicates: int
    master_seed: int

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not 0 <= self.s < self.n:
            raise ValueError("need 0 <= s < n")
        object.__setattr__(self, "rho_e_values", tuple(float(v) for v in self.rho_e_values))
        object.__setattr__(self, "rho_h_values", tuple(float(v) for v in self.rho_h_values))

    @property
    def m(self) -> int:
        return self.n - self.s

    def cells(self) -> list[tuple[float, float]]:
        """``(rho_e, rho_h)`` in cell-id order, rho_e varying slowest."""
        return [(e, h) for e in self.rho_e_values for h in self.rho_h_values]


def run_matchability_grid(
    grid: GridSpec,
    matcher: str = "sgm",
    threads: int | None = 1,
    timing: bool = False,
) -> tuple[list[ReplicateRecord], list[CellResult]]:
    """Match replicated pairs on every grid cell and classify match rates.

    Cells whose heterogeneity target is out of reach for ``p_center`` come
    back with classification ``"invalid"`` and no replicates.
    """
    if matcher not in ("sgm", "exact"):
        raise ValueError(f"unknown matcher {matcher!r}")
    if matcher == "exact" and grid.m > DEFAULT_MAX_M:
        raise MatchSizeError(f"exact matching is capped at m={DEFAULT_MAX_M}, grid has m={grid.m}")
    plans = _plan_cells(grid.cells(), grid.p_center)
    return _run_cells(
        "matchability", plans, grid.p_center, grid.n, grid.s, grid.replicates,
        grid.master_seed, matcher, threads, timing,
    )


# -- level sets ---------------------------------------------------------------


@dataclass(frozen=True)
class LevelSet:
    """Points ``(rho_e, rho_h)`` with ``(1 - rho_e)(1 - rho_h) = 1 - c``."""

    c: float
    rho_e: np.ndarray
    rho_h: np.ndarray

    def residuals(self) -> np.ndarray:
        return (1.0 - self.rho_e) * (1.0 - self.rho_h) - (1.0 - self.c)


def _rho_h_on_level(c: float, rho_e: np.ndarray) -> np.ndarray:
    if c == 1.0:
        return np.ones_like(rho_e)
    return 1.0 - (1.0 - c) / (1.0 - rho_e)


def level_set_curve(c: float, samples: int = 50) -> LevelSet:
    """Evenly spaced samples of the total-correlation level set over ``rho_e in [0, c]``."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"level c={c} outside [0, 1]")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if c == 0.0:
        return LevelSet(0.0, np.zeros(1), np.zeros(1))
    rho_e = np.linspace(0.0, c, samples) if samples > 1 else np.array([c])
    return LevelSet(c, rho_e, _rho_h_on_level(c, rho_e))


def level_set_pairs(c: float, count: int, p_center: float) -> list[tuple[float, float]]:
    """``count`` attainable points on level ``c``, from the smallest reachable rho_e to ``(c, 0)``."""
    c = float(c)
    if not 0.0 <= c < 1.0:
        raise ValueError(f"level c={c} outside [0, 1)")
    if count < 1:
        raise ValueError("count must be >= 1")
    ceiling = rho_h_ceiling(p_center)
    rho_e_min = max(0.0, 1.0 - (1.0 - c) / (1.0 - ceiling))
    rho_e = np.linspace(rho_e_min, c, count) if count > 1 else np.array([c])
    rho_h = np.clip(_rho_h_on_level(c, rho_e), 0.0, ceiling)
    return list(zip(rho_e.tolist(), rho_h.tolist()))


def run_runtime_levelsets(
    rho_T_values: Sequence[float],
    pairs_per_level: int,
    p_center: float,
    m: int,
    s: int,
    replicates: int,
    seed: int,
    threads: int | None = 1,
    timing: bool = False,
) -> tuple[list[ReplicateRecord], list[CellResult]]:
    """Exact-matching effort at several points of each total-correlation level."""
    if m > DEFAULT_MAX_M:
        raise MatchSizeError(f"exact matching is capped at m={DEFAULT_MAX_M}, got m={m}")
    points = [pt for c in rho_T_values for pt in level_set_pairs(c, pairs_per_level, p_center)]
    plans = _plan_cells(points, p_center)
    return _run_cells("runtime", plans, p_center, m + s, s, replicates, seed, "exact", threads, timing)


# -- CSV ----------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def write_records_csv(records: Iterable[ReplicateRecord], path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in records:
            row = asdict(rec)
            w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def write_summary_csv(cells: Iterable[CellResult], path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for cell in cells:
            row = asdict(cell)
            row["rho_T_realized_mean"] = row.pop("rho_T")
            row["tie_break"] = TIE_BREAK
            w.writerow([_fmt(row[c]) for c in SUMMARY_COLUMNS])


def read_summary_csv(path: str | PathLike) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def read_records_csv(path: str | PathLike) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def estimate_transition_level(cells: Iterable[CellResult]) -> float:
    """Realized rho_T threshold that best separates match rates above and below 1/2.

    Scans midpoints between consecutive realized rho_T values and returns the
    one with fewest misclassified cells (the smallest on ties).
    """
    pts = sorted((c.rho_T, c.match_rate >= 0.5) for c in cells if c.valid and c.replicates)
    if not pts:
        raise ValueError("no valid cells")
    xs = [x for x, _ in pts]
    cands = [xs[0]] + [(a + b) / 2 for a, b in zip(xs, xs[1:])] + [xs[-1]]
    best, best_err = cands[0], math.inf
    for c in cands:
        err = sum(ok != (x >= c) for x, ok in pts)
        if err < best_err:
            best, best_err = c, err
    return best


def _float(v: str) -> float:
    return float(v) if v not in ("", None) else math.nan


def cells_from_summary(rows: Iterable[dict[str, str]]) -> list[CellResult]:
    """Rebuild :class:`CellResult` objects from summary CSV rows."""
    out = []
    for r in rows:
        out.append(
            CellResult(
                experiment=r["experiment"],
                cell_id=int(r["cell_id"]),
                rho_e=float(r["rho_e"]),
                rho_h_target=float(r["rho_h_target"]),
                rho_h_realized_mean=_float(r["rho_h_realized_mean"]),
                rho_T_target=float(r["rho_T_target"]),
                rho_T=_float(r["rho_T_realized_mean"]),
                replicates=int(r["replicates"]),
                matched_count=int(r["matched_count"]),
                classification=r["classification"],
                mean_bnb_nodes=_float(r["mean_bnb_nodes"]),
                median_bnb_nodes=_float(r["median_bnb_nodes"]),
                geomean_bnb_nodes=_float(r["geomean_bnb_nodes"]),
                mean_lap_calls=_float(r["mean_lap_calls"]),
                mean_fw_iterations=_float(r["mean_fw_iterations"]),
            )
        )
    return out
