"""Command-line interface.

Exit codes: 0 success, 2 feasibility/configuration failure, 3 solver failure.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import __version__
from ._backend import BACKEND
from .coeffs import describe_assembly
from .errors import CapinflowError, ConfigError, FeasibilityError, InfeasibleMoments
from .experiments import (
    ENDOGENOUS,
    PRESETS,
    comparative,
    summarize,
    sweep,
)
from .feasibility import validate
from .params import BASELINE_MOMENTS, BASELINE_PARAMS, apply_overrides, load_config
from .shocks import MODES
from .simulate import FUNDS_MODES, run, write_plot_script

EXIT_OK = 0
EXIT_FEASIBILITY = 2
EXIT_SOLVER = 3


def _load(args) -> tuple:
    if getattr(args, "config", None):
        p, s = load_config(args.config)
    else:
        p, s = BASELINE_PARAMS, BASELINE_MOMENTS
    overrides = {}
    for item in getattr(args, "override", None) or []:
        if "=" not in item:
            raise ConfigError(f"--override expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    if overrides:
        p, s = apply_overrides(p, s, overrides)
    if getattr(args, "horizon", None) is not None:
        p, s = apply_overrides(p, s, {"horizon": args.horizon})
    return p, s


def _cmd_validate(args) -> int:
    p, s = _load(args)
    report = validate(p, s)
    print(report.format())
    return EXIT_OK if report.all_passed else EXIT_FEASIBILITY


def _cmd_simulate(args) -> int:
    p, s = _load(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    series = run(
        p,
        s,
        seed=args.seed,
        mode=args.mode,
        funds=args.funds,
        allow_negative_borrower_funds=args.allow_negative_borrower_funds,
        collect_trace=args.trace,
    )
    csv_path = out_dir / "series.csv"
    series.to_csv(csv_path)
    write_plot_script(out_dir / "trajectories.gnuplot", csv_name="series.csv")
    written = [csv_path, out_dir / "trajectories.gnuplot"]
    if args.dump_draws:
        with open(out_dir / "draws.csv", "w", newline="") as fh:
            series.dump_draws(fh)
        written.append(out_dir / "draws.csv")
    if args.trace:
        with open(out_dir / "trace.csv", "w", newline="") as fh:
            series.write_trace_csv(fh)
        written.append(out_dir / "trace.csv")
    summary = summarize(series)
    for var in ENDOGENOUS:
        st = summary.get(var)
        print(f"{var}: mean={st.mean:.6g} sd={st.sd:.6g} cv={st.cv:.6g}")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _write_summary_csv(path: Path, comp) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["variable", "baseline_mean", "scenario_mean", "percent_change"])
        for var in ENDOGENOUS:
            writer.writerow(
                [
                    var,
                    repr(comp.baseline_means[var]),
                    repr(comp.scenario_means[var]),
                    repr(comp.percent_changes[var]),
                ]
            )
        if comp.elasticity is not None:
            writer.writerow([])
            writer.writerow(["variable", "rate_of_change", "arc_elasticity"])
            for var in ENDOGENOUS:
                writer.writerow(
                    [var, repr(comp.rate_of_change[var]), repr(comp.elasticity[var])]
                )


def _cmd_compare(args) -> int:
    p, s = _load(args)
    if args.preset:
        preset = PRESETS[args.preset]
        overrides = preset.overrides
        name = preset.name
    else:
        if not args.scenario:
            raise ConfigError("compare needs --preset NAME or --scenario key=value")
        overrides = {}
        for item in args.scenario:
            if "=" not in item:
                raise ConfigError(f"--scenario expects key=value, got {item!r}")
            key, _, value = item.partition("=")
            overrides[key.strip()] = value.strip()
        from .params import parse_overrides

        p_over, m_over = parse_overrides(overrides)
        overrides = {**p_over, **m_over}
        name = "custom"
    seeds = tuple(range(args.seeds)) if args.seeds else (args.seed,)
    comp = comparative(
        name, p, s, overrides, seeds=seeds, mode=args.mode, funds=args.funds
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    comp.baseline_first.to_csv(out_dir / "baseline.csv")
    comp.scenario_first.to_csv(out_dir / "scenario.csv")
    with open(out_dir / "diff.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "d_R_star", "d_e", "d_inflow"])
        d = comp.differences
        for i in range(len(d.t)):
            writer.writerow(
                [int(d.t[i]), repr(float(d.R_star[i])), repr(float(d.e[i])), repr(float(d.inflow[i]))]
            )
    _write_summary_csv(out_dir / "summary.csv", comp)
    write_plot_script(out_dir / "trajectories.gnuplot", csv_name="baseline.csv")
    for warning in comp.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"experiment {comp.name}: overrides {comp.overrides} over {len(seeds)} seed(s)")
    for var in ENDOGENOUS:
        print(
            f"{var}: {comp.baseline_means[var]:.6g} -> {comp.scenario_means[var]:.6g} "
            f"({comp.percent_changes[var]:+.2f}%)"
        )
    if comp.elasticity is not None:
        for var in ENDOGENOUS:
            print(
                f"{var}: rate of change {comp.rate_of_change[var]:.6g}, "
                f"arc elasticity {comp.elasticity[var]:.6g}"
            )
    print(f"wrote baseline.csv scenario.csv diff.csv summary.csv to {out_dir}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    p, s = _load(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("--values must list at least one number")
    seeds = tuple(range(args.seeds)) if args.seeds else (args.seed,)
    rows = sweep(p, s, args.param, values, seeds=seeds, mode=args.mode, funds=args.funds)
    header = list(rows[0].keys())

    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [repr(row[k]) if isinstance(row[k], float) else row[k] for k in header]
            )

    if args.out:
        with open(args.out, "w", newline="") as fh:
            emit(fh)
        print(f"wrote {args.out}")
    else:
        emit(sys.stdout)
    return EXIT_OK


def _cmd_coeffs(args) -> int:
    p, s = _load(args)
    print(describe_assembly(p, s, args.r_star))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capinflow",
        description="Two-country bank portfolio equilibrium simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} backend)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, horizon=True):
        sp.add_argument("--config", help="flat key=value config file")
        sp.add_argument(
            "--override",
            action="append",
            metavar="KEY=VALUE",
            help="override one config field (repeatable)",
        )
        if horizon:
            sp.add_argument("--horizon", type=int, help="number of simulated periods")
        sp.add_argument("--mode", choices=MODES, default="deterministic-mean")
        sp.add_argument("--funds", choices=FUNDS_MODES, default="fixed")

    sp = sub.add_parser("validate", help="print the feasibility report")
    sp.add_argument("--config", help="flat key=value config file")
    sp.add_argument("--override", action="append", metavar="KEY=VALUE")
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("simulate", help="run one seeded simulation")
    add_common(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="out", help="output directory")
    sp.add_argument("--dump-draws", action="store_true", help="write draws.csv audit file")
    sp.add_argument("--trace", action="store_true", help="write per-period iteration trace")
    sp.add_argument(
        "--allow-negative-borrower-funds",
        action="store_true",
        help="with --funds accumulate: treat negative borrower funds as debt",
    )
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("compare", help="paired baseline/scenario experiment")
    add_common(sp)
    sp.add_argument("--preset", choices=sorted(PRESETS))
    sp.add_argument(
        "--scenario",
        action="append",
        metavar="KEY=VALUE",
        help="scenario override (repeatable); alternative to --preset",
    )
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--seeds", type=int, help="use seeds 0..N-1 and average")
    sp.add_argument("--out", default="compare-out")
    sp.set_defaults(func=_cmd_compare)

    sp = sub.add_parser("sweep", help="one-parameter sweep table")
    add_common(sp)
    sp.add_argument("--param", required=True)
    sp.add_argument("--values", required=True, help="comma-separated values")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--seeds", type=int, help="use seeds 0..N-1 and average")
    sp.add_argument("--out", help="write CSV here instead of stdout")
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("coeffs", help="print the value-function coefficient assembly")
    sp.add_argument("--config", help="flat key=value config file")
    sp.add_argument("--override", action="append", metavar="KEY=VALUE")
    sp.add_argument("--r-star", type=float, required=True, dest="r_star")
    sp.set_defaults(func=_cmd_coeffs)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FeasibilityError, InfeasibleMoments) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FEASIBILITY
    except CapinflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
