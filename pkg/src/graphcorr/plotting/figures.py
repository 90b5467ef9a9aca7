"""Figures for experiment summaries.

Each figure comes in two flavours: a dependency-free SVG built on
:class:`SvgCanvas`, and a matplotlib rendering for PNG or PDF output.
"""

from __future__ import annotations

from os import PathLike
from typing import Iterable, Sequence

import numpy as np

from ..experiments import CellResult, level_set_curve
from .svg import SvgCanvas

__all__ = [
    "CLASS_COLORS",
    "matchability_plot",
    "matchability_svg",
    "runtime_plot",
    "runtime_svg",
]

CLASS_COLORS = {"green": "#2ca02c", "yellow": "#e6b800", "red": "#d62728", "invalid": "#bbbbbb"}


def _limits(vals: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(vals), max(vals)
    pad = 0.05 * (hi - lo) if hi > lo else 0.05
    return lo - pad, hi + pad


def _curve(c: float, xmax: float) -> tuple[np.ndarray, np.ndarray]:
    lv = level_set_curve(c, 101)
    keep = lv.rho_e <= xmax + 1e-12
    return lv.rho_e[keep], lv.rho_h[keep]


def _by_level(cells: Iterable[CellResult]) -> dict[float, list[CellResult]]:
    out: dict[float, list[CellResult]] = {}
    for c in cells:
        out.setdefault(round(c.rho_T_target, 12), []).append(c)
    return dict(sorted(out.items()))


# -- SVG -----------------------------------------------------------------------


def matchability_svg(cells: Sequence[CellResult], levels: Sequence[float], path: str | PathLike, title: str = "") -> None:
    """Grid points coloured by classification, with rho_T level curves."""
    cells = list(cells)
    xlim = _limits([c.rho_e for c in cells])
    ylim = _limits([c.rho_h_target for c in cells])
    cv = SvgCanvas(xlim, ylim)
    cv.axes("rho_e", "rho_h")
    if title:
        cv.title(title)
    for c in cells:
        tip = f"cell {c.cell_id}: {c.matched_count}/{c.replicates} matched, rho_T={c.rho_T:.4f}"
        cv.point(c.rho_e, c.rho_h_target, CLASS_COLORS.get(c.classification, "black"), title=tip)
    for lv in levels:
        xs, ys = _curve(lv, xlim[1])
        sel = (ys >= ylim[0]) & (ys <= ylim[1])
        if sel.any():
            cv.polyline(xs[sel], ys[sel], color="#1f77b4", dash="6,3")
            cv.text(xs[sel][0], ys[sel][0], f"rho_T={lv:.3g}", size=10, anchor="start")
    cv.save(path)


def runtime_svg(cells: Sequence[CellResult], path: str | PathLike, title: str = "") -> None:
    """Level-set pairs labelled with the geometric mean node count."""
    cells = list(cells)
    xlim = _limits([c.rho_e for c in cells] + [0.0, 1.0])
    ylim = _limits([c.rho_h_target for c in cells] + [0.0])
    cv = SvgCanvas(xlim, ylim)
    cv.axes("rho_e", "rho_h")
    if title:
        cv.title(title)
    for lv, group in _by_level(cells).items():
        xs, ys = _curve(lv, 1.0)
        sel = ys >= ylim[0]
        cv.polyline(xs[sel], ys[sel], color="#1f77b4", dash="6,3")
        for c in group:
            cv.point(c.rho_e, c.rho_h_target, "#333", r=3)
            cv.text(c.rho_e, c.rho_h_target + 0.025 * (ylim[1] - ylim[0]), f"{c.geomean_bnb_nodes:.3g}", size=9)
    cv.save(path)


# -- matplotlib ----------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def matchability_plot(cells: Sequence[CellResult], levels: Sequence[float], path: str | PathLike, title: str = "") -> None:
    """Grid classification scatter plus match rate against realized rho_T."""
    plt = _pyplot()
    cells = [c for c in cells if c.valid]
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4.5))
    ax0.scatter(
        [c.rho_e for c in cells],
        [c.rho_h_target for c in cells],
        c=[CLASS_COLORS[c.classification] for c in cells],
        s=36,
        edgecolors="none",
    )
    xmax = max(c.rho_e for c in cells)
    ymax = max(c.rho_h_target for c in cells)
    for lv in levels:
        xs, ys = _curve(lv, xmax)
        sel = ys >= -1e-12
        ax0.plot(xs[sel], ys[sel], "--", lw=1.2, label=f"$\\rho_T$={lv:.3g}")
    ax0.set_xlim(-0.02 * max(xmax, 1e-3), xmax * 1.05 + 1e-3)
    ax0.set_ylim(-0.02 * max(ymax, 1e-3), ymax * 1.05 + 1e-3)
    ax0.set_xlabel(r"$\rho_e$")
    ax0.set_ylabel(r"$\rho_h$")
    if levels:
        ax0.legend(loc="upper right", fontsize=8)
    ax1.scatter([c.rho_T for c in cells], [c.match_rate for c in cells], s=18, c="k")
    ax1.set_xlabel(r"realized $\rho_T$")
    ax1.set_ylabel("match rate")
    ax1.set_ylim(-0.05, 1.05)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def runtime_plot(cells: Sequence[CellResult], path: str | PathLike, title: str = "") -> None:
    """Geometric mean node counts per level-set pair, against rho_T."""
    plt = _pyplot()
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4.5))
    for lv, group in _by_level(cells).items():
        xs, ys = _curve(lv, 1.0)
        (line,) = ax0.plot(xs, ys, "--", lw=1.0)
        ax0.scatter([c.rho_e for c in group], [c.rho_h_target for c in group], s=18, color=line.get_color())
        nodes = [c.geomean_bnb_nodes for c in group]
        ax1.scatter([lv] * len(group), nodes, s=18, color=line.get_color())
    ax0.set_xlim(0, 1)
    ax0.set_ylim(0, max(0.35, max(c.rho_h_target for c in cells) * 1.1))
    ax0.set_xlabel(r"$\rho_e$")
    ax0.set_ylabel(r"$\rho_h$")
    ax1.set_yscale("log")
    ax1.set_xlabel(r"$\rho_T$ level")
    ax1.set_ylabel("geometric mean B&B nodes")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
