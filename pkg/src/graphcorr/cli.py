"""Command-line front end.

Numeric flags accept decimals or exact rationals such as ``23/120``; list
flags take comma-separated values and ``a,b,...,z`` expands to the
arithmetic progression from ``a`` in steps of ``b - a`` up to ``z``.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import experiments as ex
from .graph import SeededPair, density, disagreements, read_edge_list, read_permutation, write_edge_list, write_permutation
from .matching import DEFAULT_MAX_M, MatchSizeError, build_bilp, exact_match, is_matchable, sgm_match, write_lp
from .model import UniformFamilySpec, make_rng, param_stats, read_model_spec, sample_pair, sample_uniform_family, write_model_spec
from .strength import (
    alignment_strength,
    mean_disagreements_bruteforce,
    mean_disagreements_closed_form,
)

log = logging.getLogger("graphcorr")

FULL_GRID_STEP = Fraction(1, 120)
DESK_GRID_STEP = Fraction(1, 24)


# -- argument types -------------------------------------------------------------


def rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def rational_list(text: str) -> list[Fraction]:
    parts = [t.strip() for t in text.split(",") if t.strip()]
    if "..." not in parts:
        return [rational(t) for t in parts]
    k = parts.index("...")
    if k < 2 or k != len(parts) - 2 or "..." in parts[k + 1 :]:
        raise argparse.ArgumentTypeError(f"use 'a,b,...,z' for a progression, got {text!r}")
    head = [rational(t) for t in parts[:k]]
    stop = rational(parts[-1])
    step = head[-1] - head[-2]
    if step <= 0 or stop < head[-1]:
        raise argparse.ArgumentTypeError(f"progression in {text!r} must increase towards its last value")
    out = head
    while out[-1] + step <= stop:
        out.append(out[-1] + step)
    if out[-1] != stop:
        raise argparse.ArgumentTypeError(f"{stop} is not reached from {head[-1]} in steps of {step}")
    return out


def _floats(vals) -> list[float]:
    return [float(v) for v in vals]


def _progression(step: Fraction, stop: Fraction) -> list[Fraction]:
    return [step * k for k in range(int(stop / step) + 1)]


def _threads(args) -> int:
    return args.threads if args.threads is not None else ex.default_threads()


def _emit_csv(header, rows, out=None) -> None:
    fh = open(out, "w", encoding="utf-8", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if out:
            fh.close()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


# -- subcommands ----------------------------------------------------------------


def cmd_sample(args) -> None:
    rng = make_rng(args.seed)
    if args.spec:
        spec = read_model_spec(args.spec)
    else:
        if args.n is None:
            raise ValueError("sample needs --n (or --spec)")
        fam = UniformFamilySpec(n=args.n, p_center=float(args.p), delta=float(args.delta), rho_e=float(args.rho_e))
        spec = sample_uniform_family(fam, rng)
    g, h = sample_pair(spec, rng)
    write_edge_list(g, args.out_g)
    write_edge_list(h, args.out_h)
    if args.out_spec:
        write_model_spec(spec, args.out_spec)


def cmd_strength(args) -> None:
    g, h = read_edge_list(args.g), read_edge_list(args.h)
    phi = read_permutation(args.perm, g.n) if args.perm else None
    mean = mean_disagreements_bruteforce(g, h) if args.bruteforce else mean_disagreements_closed_form(g, h)
    row = [
        _fmt(alignment_strength(g, h, phi)),
        disagreements(g, h, phi),
        _fmt(density(g)),
        _fmt(density(h)),
        _fmt(float(mean)),
    ]
    _emit_csv(["strength", "d", "density_g", "density_h", "mean_disagreements"], [row])


def cmd_stats(args) -> None:
    spec = read_model_spec(args.spec)
    st = param_stats(spec)
    _emit_csv(["n", "rho_e", "mu", "sigma2", "rho_h", "rho_T"], [[spec.n, _fmt(spec.rho_e), *map(_fmt, (st.mu, st.sigma2, st.rho_h, st.rho_T))]])


def _pair(args) -> SeededPair:
    return SeededPair(read_edge_list(args.g), read_edge_list(args.h), args.seeds)


def _report_match(res, out_perm, timing) -> None:
    if out_perm:
        write_permutation(res.phi, out_perm)
    header = ["method", "n", "s", "m", "objective", "matched", "fw_iterations", "bnb_nodes", "lap_calls", "wall_time_s", "tie_break", "permutation"]
    wall = _fmt(res.wall_time) if timing else ""
    row = [res.method, res.s + res.m, res.s, res.m, res.objective, int(is_matchable(res)), res.fw_iterations, res.bnb_nodes, res.lap_calls, wall, res.tie_break,
           " ".join(str(v + 1) for v in res.phi)]
    _emit_csv(header, [row])


def cmd_match_sgm(args) -> None:
    res = sgm_match(_pair(args), max_iter=args.max_iter, tol=float(args.tol))
    _report_match(res, args.out, args.timing)


def cmd_match_exact(args) -> None:
    res = exact_match(_pair(args), use_sgm_incumbent=not args.no_incumbent, max_m=args.max_m)
    _report_match(res, args.out, args.timing)


def cmd_export_lp(args) -> None:
    model = build_bilp(_pair(args))
    write_lp(model, args.out)
    log.info("wrote %d variables, %d constraints to %s", model.n_vars, model.n_rows, args.out)


def _write_outputs(args, records, cells) -> None:
    ex.write_records_csv(records, args.out)
    if getattr(args, "summary", None):
        ex.write_summary_csv(cells, args.summary)


def cmd_convergence(args) -> None:
    recs = ex.run_convergence(
        args.n, float(args.p), float(args.delta), float(args.rho_e), args.replicates, args.seed, _threads(args)
    )
    ex.write_records_csv(recs, args.out)
    diffs = np.array([r.strength_identity - r.rho_T_realized for r in recs])
    rate = np.array([r.disagreement_rate for r in recs])
    print(f"replicates={len(recs)} mean_strength={np.mean([r.strength_identity for r in recs]):.6f} "
          f"mean|str-rho_T|={np.mean(np.abs(diffs)):.6f} mean_rate={rate.mean():.6f}")


def cmd_matchability(args) -> None:
    if args.full_scale:
        log.warning("full scale: n=1000, 41x41 grid, 60 replicates; expect many CPU-hours")
        n, s, reps = 1000, 150, 60
        default_vals = _progression(FULL_GRID_STEP, Fraction(1, 3))
    else:
        n, s, reps = 180, 30, 20
        default_vals = _progression(DESK_GRID_STEP, Fraction(1, 3))
    grid = ex.GridSpec(
        rho_e_values=tuple(_floats(args.rho_e or default_vals)),
        rho_h_values=tuple(_floats(args.rho_h or default_vals)),
        p_center=float(args.p),
        n=args.n or n,
        s=args.s if args.s is not None else s,
        replicates=args.replicates or reps,
        master_seed=args.seed,
    )
    records, cells = ex.run_matchability_grid(grid, args.matcher, _threads(args), args.timing)
    _write_outputs(args, records, cells)
    valid = [c for c in cells if c.valid]
    level = ex.estimate_transition_level(valid) if valid else None
    if level is not None:
        print(f"estimated transition at realized rho_T ~ {level:.4f}")
    levels = _floats(args.levels) if args.levels else ([level] if level is not None else [])
    if args.svg:
        from .plotting import matchability_svg

        matchability_svg(cells, levels, args.svg)
    if args.figure:
        from .plotting import matchability_plot

        matchability_plot(cells, levels, args.figure)
    counts = {k: sum(c.classification == k for c in cells) for k in ("green", "yellow", "red", "invalid")}
    print(" ".join(f"{k}={v}" for k, v in counts.items()))


def cmd_runtime(args) -> None:
    if args.full_scale:
        log.warning("full scale: m=20, s=480; exact matching may take hours per level")
        m, s = 20, 480
    else:
        m, s = 10, 100
    m = args.m or m
    s = args.s if args.s is not None else s
    if m > DEFAULT_MAX_M:
        raise MatchSizeError(f"exact matching is capped at m={DEFAULT_MAX_M}, got m={m}")
    levels = _floats(args.levels)
    records, cells = ex.run_runtime_levelsets(
        levels, args.pairs, float(args.p), m, s, args.replicates, args.seed, _threads(args), args.timing
    )
    _write_outputs(args, records, cells)
    if args.svg:
        from .plotting import runtime_svg

        runtime_svg(cells, args.svg)
    if args.figure:
        from .plotting import runtime_plot

        runtime_plot(cells, args.figure)
    for c in cells:
        print(f"rho_T={c.rho_T_target:.4f} rho_e={c.rho_e:.4f} rho_h={c.rho_h_target:.4f} geomean_nodes={c.geomean_bnb_nodes:.2f}")


def cmd_levelset(args) -> None:
    if args.p is not None:
        pts = ex.level_set_pairs(float(args.c), args.samples, float(args.p))
        rows = [[_fmt(e), _fmt(h)] for e, h in pts]
    else:
        lv = ex.level_set_curve(float(args.c), args.samples)
        rows = [[_fmt(float(e)), _fmt(float(h))] for e, h in zip(lv.rho_e, lv.rho_h)]
    _emit_csv(["rho_e", "rho_h"], rows, args.out)


def cmd_plot(args) -> None:
    cells = ex.cells_from_summary(ex.read_summary_csv(args.summary))
    if not cells:
        raise ValueError(f"{args.summary} has no cells")
    kind = args.kind
    if kind == "auto":
        kind = "runtime" if cells[0].experiment == "runtime" else "matchability"
    raster = Path(args.out).suffix.lower() in (".png", ".pdf")
    from . import plotting

    if kind == "runtime":
        (plotting.runtime_plot if raster else plotting.runtime_svg)(cells, args.out)
        return
    valid = [c for c in cells if c.valid]
    levels = _floats(args.levels) if args.levels else [ex.estimate_transition_level(valid)]
    (plotting.matchability_plot if raster else plotting.matchability_svg)(cells, levels, args.out)


# -- parser ---------------------------------------------------------------------


def _add_pair(p) -> None:
    p.add_argument("--g", required=True, help="edge list of G")
    p.add_argument("--h", required=True, help="edge list of H")
    p.add_argument("--seeds", type=int, required=True, help="number of seed vertices (the first s)")


def _add_run(p) -> None:
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: $ALIGN_THREADS or CPU count)")
    p.add_argument("--out", required=True, help="replicate CSV")
    p.add_argument("--timing", action="store_true", help="record wall time (makes output run-dependent)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphcorr", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a correlated pair")
    p.add_argument("--n", type=int)
    p.add_argument("--rho-e", type=rational, default=Fraction(0))
    p.add_argument("--p", type=rational, default=Fraction(1, 2))
    p.add_argument("--delta", type=rational, default=Fraction(0))
    p.add_argument("--spec", help="sample from a model file instead of the uniform family")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-g", required=True)
    p.add_argument("--out-h", required=True)
    p.add_argument("--out-spec", help="also write the sampled model")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("strength", help="alignment strength of a bijection")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--perm", help="permutation file, one 1-based image per line")
    p.add_argument("--bruteforce", action="store_true", help="average over all n! bijections (small n only)")
    p.set_defaults(func=cmd_strength)

    p = sub.add_parser("stats", help="parameter statistics of a model file")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("match-sgm", help="Frank-Wolfe seeded matching")
    _add_pair(p)
    p.add_argument("--max-iter", type=int, default=30)
    p.add_argument("--tol", type=rational, default=Fraction(1, 10**6))
    p.add_argument("--out", help="write the full 1-based permutation")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_match_sgm)

    p = sub.add_parser("match-exact", help="branch-and-bound seeded matching")
    _add_pair(p)
    p.add_argument("--max-m", type=int, default=DEFAULT_MAX_M, help="ambiguous-vertex cap")
    p.add_argument("--no-incumbent", action="store_true", help="skip the Frank-Wolfe starting incumbent")
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_match_exact)

    p = sub.add_parser("export-lp", help="write the matching BILP in LP format")
    _add_pair(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("experiment", help="replicated experiments")
    exp = p.add_subparsers(dest="experiment", required=True)

    q = exp.add_parser("convergence")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--p", type=rational, default=Fraction(1, 2))
    q.add_argument("--delta", type=rational, default=Fraction(0))
    q.add_argument("--rho-e", type=rational, required=True)
    q.add_argument("--replicates", type=int, default=20)
    _add_run(q)
    q.set_defaults(func=cmd_convergence)

    q = exp.add_parser("matchability")
    q.add_argument("--n", type=int)
    q.add_argument("--s", type=int)
    q.add_argument("--p", type=rational, default=Fraction(1, 2))
    q.add_argument("--rho-e", type=rational_list, help="grid rho_e values")
    q.add_argument("--rho-h", type=rational_list, help="grid rho_h values")
    q.add_argument("--replicates", type=int)
    q.add_argument("--matcher", choices=("sgm", "exact"), default="sgm")
    q.add_argument("--full-scale", action="store_true", help="full-size defaults (very slow)")
    q.add_argument("--levels", type=rational_list, help="rho_T curves to overlay")
    q.add_argument("--summary", help="per-cell summary CSV")
    q.add_argument("--svg")
    q.add_argument("--figure", help="matplotlib figure (.png or .pdf)")
    _add_run(q)
    q.set_defaults(func=cmd_matchability)

    q = exp.add_parser("runtime")
    q.add_argument("--m", type=int)
    q.add_argument("--s", type=int)
    q.add_argument("--p", type=rational, default=Fraction(1, 2))
    q.add_argument("--levels", type=rational_list, default=rational_list("2/9,3/9,...,8/9"))
    q.add_argument("--pairs", type=int, default=3, help="level-set points per level")
    q.add_argument("--replicates", type=int, default=30)
    q.add_argument("--full-scale", action="store_true", help="m=20, s=480 (very slow)")
    q.add_argument("--summary")
    q.add_argument("--svg")
    q.add_argument("--figure")
    _add_run(q)
    q.set_defaults(func=cmd_runtime)

    p = sub.add_parser("levelset", help="sample a rho_T level curve")
    p.add_argument("--c", type=rational, required=True)
    p.add_argument("--samples", type=int, default=11)
    p.add_argument("--p", type=rational, help="restrict to heterogeneity reachable at this p")
    p.add_argument("--out")
    p.set_defaults(func=cmd_levelset)

    p = sub.add_parser("plot", help="render a summary CSV")
    p.add_argument("--summary", required=True)
    p.add_argument("--out", required=True, help=".svg, or .png/.pdf via matplotlib")
    p.add_argument("--kind", choices=("auto", "matchability", "runtime"), default="auto")
    p.add_argument("--levels", type=rational_list)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"graphcorr {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
