"""Command-line entry point.

Subcommands: bump, weights check, exponents, sweep, fit, crosscheck,
table1.  Every run is driven by a flat key=value config file (defaults
apply when none is given) and writes machine-readable outputs; the
resolved configuration is echoed into each JSON report.

Exit codes: 0 success, 2 infeasible configuration (the message names
the violated inequality), 3 numerical cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bumps import (
    BumpConstructionError,
    check_moments,
    make_moment_vanishing_bump,
)
from .config import (
    AUTO,
    ConfigParseError,
    RunConfig,
    load_config,
    serialize_config,
    with_overrides,
)
from .grid import GridError, GridSpec
from .scenario import (
    AdmissibilityError,
    SweepAbortedError,
    SweepContext,
    fit_power_law,
    predicted_slopes,
    run_crosschecks,
    sweep,
    table_probe,
)
from .weights import (
    CubeFamily,
    InfeasibleConfigError,
    ap_constant,
    multilinear_constant,
    pq_class_constant,
    verify_lemma21,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3

MODES_CHOICES = ("standard", "generalized", "weak", "contrast")

_CONFIG_ERRORS = (
    InfeasibleConfigError,
    ConfigParseError,
    AdmissibilityError,
    SweepAbortedError,
    BumpConstructionError,
    GridError,
)


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for name in ("eps_min", "eps_max", "steps", "mode", "jobs"):
        if hasattr(args, name):
            overrides[name] = getattr(args, name)
    return with_overrides(cfg, **overrides)


def _emit_json(payload: dict, out_path, stdout=True):
    from .report import write_json

    if out_path:
        write_json(payload, out_path)
    if stdout:
        print(json.dumps(payload, indent=2, sort_keys=True, default=float))


def cmd_bump(args) -> int:
    run = _load(args)
    r = run.resolved_r() if args.r is None else args.r
    ell = (0 if run.ell == AUTO else int(run.ell)) if args.ell is None else args.ell
    spec = GridSpec(run.n, run.L_box, run.M)
    bump = make_moment_vanishing_bump(r, ell, spec)
    support = spec.radius_xi[np.abs(bump.phi_hat.values) > 0.0]
    payload = {
        "r": r,
        "ell": ell,
        "moment_residual": check_moments(bump),
        "phiphi0": bump.phiphi0,
        "support_radius_measured": float(support.max()) if support.size else 0.0,
    }
    _emit_json(payload, args.out_json)
    return EXIT_OK


def cmd_weights_check(args) -> int:
    run = _load(args)
    cfg = run.resolve_exponents()
    cfg.validate_weight_class()
    family = CubeFamily.default(run.family_K, dimension=cfg.n)
    w = cfg.weight_vector()
    mc = multilinear_constant(w, cfg.q_vec, family)
    # the generalized class with the mode's natural regularity exponents
    if cfg.is_generalized:
        q_for_pq = tuple(cfg.n / sk for sk in cfg.s)
    else:
        q_for_pq = tuple(cfg.N * cfg.n / cfg.s for _ in cfg.p_vec)
    pq = pq_class_constant(w, cfg.p_vec, q_for_pq, family)
    ap1 = ap_constant(cfg.alpha1, cfg.q_vec[0], family)
    lemma = verify_lemma21(cfg, family)
    payload = {
        "alpha1": cfg.alpha1,
        "alpha2": cfg.alpha2,
        "multilinear_constant": mc,
        "pq_constant": pq,
        "single_weight_divergent": ap1.divergent,
        "single_weight_growth_factors": list(ap1.growth_factors),
        "lemma21": {
            "off_origin_max": lemma.off_origin_max,
            "origin_max": lemma.origin_max,
            "bounded": lemma.bounded,
        },
    }
    _emit_json(payload, args.out_json)
    return EXIT_OK


def cmd_exponents(args) -> int:
    run = _load(args)
    cfg = run.resolve_exponents()
    if run.mode == "contrast":
        cfg.validate_weight_class()
    else:
        cfg.validate_counterexample()
    pred = predicted_slopes(cfg)
    print(f"alpha1 = {cfg.alpha1}")
    print(f"alpha2 = {cfg.alpha2}")
    print(f"ell = {cfg.ell}")
    print(f"q = {list(cfg.q_vec)}")
    print(f"a_nu = {cfg.a_nu}")
    print(f"predicted ratio slope = {pred.ratio}")
    payload = {"config_echo": run.echo_dict(), "predicted_slopes": pred.as_dict()}
    if args.out_json:
        _emit_json(payload, args.out_json, stdout=False)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .report import render_sweep_figure, write_csv, write_gnuplot_script, write_json

    run = _load(args)
    cfg = run.resolve_exponents()
    report = sweep(
        cfg,
        eps_list=run.eps_list(),
        mode=run.mode,
        box_length=run.L_box,
        points=run.M,
        jobs=run.jobs,
    )
    out_csv = Path(args.out_csv or "sweep.csv")
    out_json = Path(args.out_json or out_csv.with_suffix(".json"))
    out_fig = Path(args.out_fig or out_csv.with_suffix(".png"))
    write_csv(report, out_csv)
    write_json(report.as_json_dict(run.echo_dict()), out_json)
    render_sweep_figure(report, out_fig)
    written = [str(out_csv), str(out_json), str(out_fig)]
    if args.plot_script:
        write_gnuplot_script(out_csv, args.plot_script)
        written.append(str(args.plot_script))
    print(f"pass = {report.passed}")
    print("wrote " + " ".join(written))
    return EXIT_OK


def cmd_fit(args) -> int:
    from .report import read_sweep_csv

    columns = read_sweep_csv(args.csv)
    eps = columns["epsilon"]
    order = np.argsort(-eps)
    drop = args.drop_largest
    keep = order[drop:] if eps.size > drop + 2 else order
    payload = {"source": str(args.csv), "dropped_largest": int(eps.size - keep.size)}
    fits = {}
    for name in ("lhs_strong", "sup_sobolev", "f1_norm", "ratio_strong", "ratio_weak"):
        fit = fit_power_law(eps[keep], columns[name][keep])
        fits[name] = {"slope": fit.slope, "r_squared": fit.r_squared}
    payload["fitted"] = fits
    _emit_json(payload, args.out_json)
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    run = _load(args)
    cfg = run.resolve_exponents()
    cfg.validate_counterexample()
    tolerances = {
        "sobolev": run.tol_crosscheck_sobolev,
        "f1": run.tol_crosscheck_f1,
        "tm": run.tol_crosscheck_tm,
    }
    results = run_crosschecks(cfg, tolerances=tolerances)
    payload = {
        "config_echo": run.echo_dict(),
        "checks": [
            {
                "name": c.name,
                "epsilon": c.epsilon,
                "identity": c.identity_value,
                "direct": c.direct_value,
                "rel_error": c.rel_error,
                "tolerance": c.tolerance,
                "ok": c.ok,
            }
            for c in results
        ],
        "pass": all(c.ok for c in results),
    }
    _emit_json(payload, args.out_json)
    if not all(c.ok for c in results):
        worst = max(results, key=lambda c: c.rel_error / c.tolerance)
        print(
            f"numerical check failed: {worst.name} at eps={worst.epsilon} "
            f"rel error {worst.rel_error:.3e} > {worst.tolerance:.1e}",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_table1(args) -> int:
    from .report import render_table_figure

    run = _load(args)
    cfg = run.resolve_exponents()
    cells = table_probe(
        cfg, eps_list=run.eps_list(), box_length=run.L_box, points=run.M
    )
    diverging = [
        (c.regularity, c.weight_class) for c in cells if c.blows_up
    ]
    payload = {
        "config_echo": run.echo_dict(),
        "cells": [
            {
                "regularity": c.regularity,
                "weight_class": c.weight_class,
                "ratio_slope": c.ratio_slope,
                "blows_up": c.blows_up,
            }
            for c in cells
        ],
        "diverging_cells": [list(pair) for pair in diverging],
        "pass": diverging == [("W^(s/N,...)", "multilinear_class")],
    }
    _emit_json(payload, args.out_json)
    if args.out_fig:
        render_table_figure(cells, args.out_fig)
    return EXIT_OK


def cmd_show_config(args) -> int:
    run = _load(args)
    sys.stdout.write(serialize_config(run))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wmult",
        description=(
            "Numerical laboratory for weighted estimates of multilinear "
            "Fourier multiplier operators"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, json_out=True):
        p.add_argument("--config", type=Path, default=None, help="key=value config file")
        if json_out:
            p.add_argument("--out-json", type=Path, default=None)

    p_bump = sub.add_parser("bump", help="build the moment-vanishing bump, emit diagnostics")
    add_common(p_bump)
    p_bump.add_argument("--r", type=float, default=None, help="support radius override")
    p_bump.add_argument("--ell", type=int, default=None, help="moment order override")
    p_bump.set_defaults(func=cmd_bump)

    p_weights = sub.add_parser("weights", help="weight-class probes")
    wsub = p_weights.add_subparsers(dest="weights_command", required=True)
    p_wcheck = wsub.add_parser("check", help="class constants and divergence flags")
    add_common(p_wcheck)
    p_wcheck.set_defaults(func=cmd_weights_check)

    p_exp = sub.add_parser("exponents", help="resolve and print the exponent choice")
    add_common(p_exp)
    p_exp.add_argument("--mode", default=None, choices=MODES_CHOICES)
    p_exp.set_defaults(func=cmd_exponents)

    p_sweep = sub.add_parser("sweep", help="run the epsilon sweep, write CSV/JSON/figure")
    add_common(p_sweep)
    p_sweep.add_argument("--out-csv", type=Path, default=None)
    p_sweep.add_argument("--out-fig", type=Path, default=None)
    p_sweep.add_argument("--plot-script", type=Path, default=None,
                         help="also emit a gnuplot script referencing the CSV")
    p_sweep.add_argument("--eps-min", type=float, default=None)
    p_sweep.add_argument("--eps-max", type=float, default=None)
    p_sweep.add_argument("--steps", type=int, default=None)
    p_sweep.add_argument("--mode", default=None, choices=MODES_CHOICES)
    p_sweep.add_argument("--jobs", type=int, default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_fit = sub.add_parser("fit", help="refit slopes from an existing sweep CSV")
    p_fit.add_argument("--csv", type=Path, required=True)
    p_fit.add_argument("--drop-largest", type=int, default=2)
    p_fit.add_argument("--out-json", type=Path, default=None)
    p_fit.set_defaults(func=cmd_fit)

    p_cc = sub.add_parser("crosscheck", help="identity paths vs direct grid transforms")
    add_common(p_cc)
    p_cc.set_defaults(func=cmd_crosscheck)

    p_t1 = sub.add_parser("table1", help="probe the four (regularity, class) cells")
    add_common(p_t1)
    p_t1.add_argument("--out-fig", type=Path, default=None)
    p_t1.set_defaults(func=cmd_table1)

    p_show = sub.add_parser("show-config", help="print the resolved config file form")
    add_common(p_show, json_out=False)
    p_show.set_defaults(func=cmd_show_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"infeasible configuration: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
