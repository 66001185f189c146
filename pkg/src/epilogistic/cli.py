"""Command-line front end.

Subcommands: fit a CSV of observed cases, simulate a trajectory, compare a
control policy against the baseline, sweep treatment-capacity multipliers,
and plot observed/model curves.  All artifacts (JSON, CSV, SVG) are
deterministic: identical inputs produce byte-identical files.

Exit codes: 0 success, 1 I/O failure, 2 validation/parse error,
3 optimizer non-convergence (the result is still written).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .calibration import fit
from .casedata import CaseDataError, CaseSeries, ColumnSchema, parse_case_csv, series_to_csv
from .model import ControlPolicy, ModelParams
from .numerics import IntegrationOverflowError, Trajectory
from .scenarios import (
    ScenarioSpec,
    model_trajectory,
    report_to_csv,
    report_to_json,
    run_scenario,
    treatment_sweep,
)
from .svgchart import ChartStyle, emit_svg

__all__ = ["main", "build_parser"]


def _json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _out_dir(args) -> Path:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _wants(args, kind: str) -> bool:
    return args.format in (kind, "both")


def _resolve_params(args) -> tuple[ModelParams, float]:
    """Model parameters and start level from flags or a previous fit."""
    if args.from_fit is not None:
        doc = json.loads(Path(args.from_fit).read_text(encoding="utf-8"))
        try:
            params = ModelParams(float(doc["r"]), float(doc["gamma"]), float(doc["h"]))
            fit_y0 = float(doc["y0"])
        except KeyError as exc:
            raise ValueError(f"{args.from_fit}: fit file is missing key {exc}") from None
        y0 = args.y0 if args.y0 is not None else fit_y0
        return params, y0
    if args.r is None or args.gamma is None or args.h is None:
        raise ValueError("model parameters required: pass --r, --gamma and --h, or --from-fit")
    params = ModelParams(args.r, args.gamma, args.h)
    return params, (args.y0 if args.y0 is not None else 1.0)


def _detect_schema(content: bytes) -> ColumnSchema:
    header = content.split(b"\n", 1)[0].decode("utf-8", errors="replace")
    names = [name.strip() for name in header.split(",")]
    if "daily" in names:
        return ColumnSchema(date_column="date", daily_column="daily")
    if "cumulative" in names:
        return ColumnSchema(date_column="date", daily_column=None, cumulative_column="cumulative")
    raise CaseDataError(
        f"cannot detect count column in header {names!r}: expected 'daily' or 'cumulative'"
    )


def _read_series(path: str) -> CaseSeries:
    content = Path(path).read_bytes()
    return parse_case_csv(content, _detect_schema(content))


def _series_trajectory(series: CaseSeries) -> Trajectory:
    return Trajectory(
        t0_epoch=series.epoch_date,
        step=1.0,
        cumulative=series.cumulative.astype(float),
        daily=series.daily.astype(float),
    )


def _trajectory_csv(traj: Trajectory) -> str:
    lines = ["day,date,cumulative,daily"]
    dates = traj.dates()
    for i in range(len(traj.cumulative)):
        lines.append(
            f"{i},{dates[i].isoformat()},{float(traj.cumulative[i])!r},{float(traj.daily[i])!r}"
        )
    return "\n".join(lines) + "\n"


def cmd_fit(args) -> int:
    series = _read_series(args.input)
    result = fit(series)
    out = _out_dir(args)

    (out / "fit.json").write_text(result.to_json(), encoding="utf-8")
    if _wants(args, "csv"):
        lines = ["day,date,observed_cumulative,model_cumulative,residual"]
        for i, d in enumerate(series.dates):
            observed = float(series.cumulative[i])
            residual = float(result.residuals[i])
            lines.append(
                f"{i},{d.isoformat()},{observed!r},{observed + residual!r},{residual!r}"
            )
        (out / "residuals.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        (out / "series.csv").write_text(series_to_csv(series), encoding="utf-8")
    if args.plot:
        model = model_trajectory(
            result.params,
            ControlPolicy(),
            result.y0_used,
            len(series) - 1,
            t0_epoch=series.epoch_date,
        )
        svg = emit_svg(
            [("observed", _series_trajectory(series)), ("fitted model", model)],
            ChartStyle(title="Observed vs fitted cumulative cases"),
        )
        (out / "chart.svg").write_bytes(svg)

    p = result.params
    print(
        f"r={p.r:.6g} gamma={p.gamma:.6g} h={p.h:.6g} rmse={result.rmse:.6g} "
        f"converged={result.converged}"
    )
    return 0 if result.converged else 3


def cmd_simulate(args) -> int:
    params, y0 = _resolve_params(args)
    policy = ControlPolicy(u=args.u, v=args.v, treatment_multiplier=args.mult)
    traj = model_trajectory(params, policy, y0, args.horizon)
    out = _out_dir(args)

    peak_day = int(traj.daily.argmax())
    summary = {
        "r": params.r,
        "gamma": params.gamma,
        "h": params.h,
        "u": policy.u,
        "v": policy.v,
        "treatment_multiplier": policy.treatment_multiplier,
        "y0": y0,
        "horizon": args.horizon,
        "final_cumulative": float(traj.cumulative[-1]),
        "peak_day": peak_day,
        "peak_date": traj.dates()[peak_day].isoformat(),
        "peak_daily": float(traj.daily[peak_day]),
    }
    (out / "simulate.json").write_text(_json_text(summary), encoding="utf-8")
    if _wants(args, "csv"):
        (out / "trajectories.csv").write_text(_trajectory_csv(traj), encoding="utf-8")
    if args.plot:
        svg = emit_svg([("model", traj)], ChartStyle(title="Simulated trajectory", series="both"))
        (out / "chart.svg").write_bytes(svg)

    print(
        f"final_cumulative={summary['final_cumulative']:.6g} "
        f"peak_day={peak_day} peak_daily={summary['peak_daily']:.6g}"
    )
    return 0


def cmd_scenario(args) -> int:
    params, y0 = _resolve_params(args)
    policy = ControlPolicy(u=args.u, v=args.v, treatment_multiplier=args.mult)
    report = run_scenario(params, ScenarioSpec("scenario", policy, args.horizon, y0))
    out = _out_dir(args)

    (out / "scenario.json").write_text(report_to_json(report), encoding="utf-8")
    if _wants(args, "csv"):
        (out / "trajectories.csv").write_text(report_to_csv(report), encoding="utf-8")
    if args.plot:
        svg = emit_svg(
            [("baseline", report.baseline), ("scenario", report.scenario)],
            ChartStyle(title="Baseline vs scenario", series="both"),
        )
        (out / "chart.svg").write_bytes(svg)

    print(
        f"avg_reduction={report.avg_cumulative_reduction:.6g} "
        f"max_reduction={report.max_cumulative_reduction:.6g} "
        f"final_size_reduction={report.final_size_reduction:.6g}"
    )
    return 0


def cmd_sweep(args) -> int:
    params, y0 = _resolve_params(args)
    multipliers = args.mult if args.mult else [2.0, 5.0]
    reports = treatment_sweep(params, multipliers, args.horizon, y0)
    out = _out_dir(args)

    doc = {
        "multipliers": multipliers,
        "reports": [json.loads(report_to_json(rep)) for rep in reports],
    }
    (out / "sweep.json").write_text(_json_text(doc), encoding="utf-8")
    if _wants(args, "csv"):
        baseline = reports[0].baseline
        header = ["day", "date", "baseline_cumulative", "baseline_daily"]
        for rep in reports:
            header += [f"{rep.label}_cumulative", f"{rep.label}_daily"]
        lines = [",".join(header)]
        dates = baseline.dates()
        for i in range(len(baseline.cumulative)):
            cells = [
                str(i),
                dates[i].isoformat(),
                repr(float(baseline.cumulative[i])),
                repr(float(baseline.daily[i])),
            ]
            for rep in reports:
                cells.append(repr(float(rep.scenario.cumulative[i])))
                cells.append(repr(float(rep.scenario.daily[i])))
            lines.append(",".join(cells))
        (out / "trajectories.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.plot:
        labeled = [("baseline", reports[0].baseline)]
        labeled += [(rep.label, rep.scenario) for rep in reports]
        svg = emit_svg(labeled, ChartStyle(title="Treatment capacity sweep"))
        (out / "chart.svg").write_bytes(svg)

    for rep in reports:
        print(
            f"{rep.label}: avg_reduction={rep.avg_cumulative_reduction:.6g} "
            f"final_size_reduction={rep.final_size_reduction:.6g} "
            f"peak_day={rep.peak_day_scenario}"
        )
    return 0


def cmd_plot(args) -> int:
    labeled: list[tuple[str, Trajectory]] = []
    out = _out_dir(args)
    series = None
    if args.input is not None:
        series = _read_series(args.input)
        labeled.append(("observed", _series_trajectory(series)))
        (out / "series.csv").write_text(series_to_csv(series), encoding="utf-8")

    if args.from_fit is not None or args.r is not None:
        params, y0 = _resolve_params(args)
        policy = ControlPolicy(u=args.u, v=args.v, treatment_multiplier=args.mult)
        if series is not None:
            if args.y0 is None and args.from_fit is None:
                y0 = float(series.cumulative[0])
            traj = model_trajectory(
                params, policy, y0, len(series) - 1, t0_epoch=series.epoch_date
            )
        else:
            traj = model_trajectory(params, policy, y0, args.horizon)
        labeled.append(("model", traj))

    if not labeled:
        raise ValueError("nothing to plot: pass --input and/or model parameters")

    svg = emit_svg(labeled, ChartStyle(title="Cumulative cases", series=args.series))
    (out / "chart.svg").write_bytes(svg)
    print(f"wrote {out / 'chart.svg'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epilogistic",
        description="Controlled logistic epidemic model: calibration and scenario analysis.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_io(p, input_required=False, input_allowed=True):
        if input_allowed:
            p.add_argument(
                "--input",
                required=input_required,
                help="case-count CSV (header row; ISO dates; 'daily' or 'cumulative' column)",
            )
        p.add_argument("--output", default=".", help="output directory (created if missing)")
        p.add_argument(
            "--format",
            choices=("json", "csv", "both"),
            default="both",
            help="json skips the CSV tables; the JSON result document is always written",
        )
        p.add_argument("--plot", action="store_true", help="also write chart.svg")

    def add_params(p):
        p.add_argument("--r", type=float, help="human-to-human transmission rate (per day)")
        p.add_argument("--gamma", type=float, help="treatment facility rate (per day)")
        p.add_argument("--h", type=float, help="zoonotic transmission rate (persons per day)")
        p.add_argument("--from-fit", dest="from_fit", help="fit.json from a previous fit run")
        p.add_argument("--y0", type=float, help="initial cumulative cases (default 1)")
        p.add_argument("--horizon", type=int, default=236, help="days to simulate (default 236)")

    def add_policy(p):
        p.add_argument("--u", type=float, default=0.0, help="efficacy of control 1, in [0, 1]")
        p.add_argument("--v", type=float, default=0.0, help="efficacy of control 2, in [0, 1]")

    p_fit = sub.add_parser("fit", help="fit (r, gamma, h) to an observed case series")
    add_io(p_fit, input_required=True)
    p_fit.set_defaults(func=cmd_fit)

    p_sim = sub.add_parser("simulate", help="simulate one trajectory")
    add_io(p_sim, input_allowed=False)
    add_params(p_sim)
    add_policy(p_sim)
    p_sim.add_argument("--mult", type=float, default=1.0, help="treatment multiplier (>= 1)")
    p_sim.set_defaults(func=cmd_simulate)

    p_scen = sub.add_parser("scenario", help="compare a control policy against the baseline")
    add_io(p_scen, input_allowed=False)
    add_params(p_scen)
    add_policy(p_scen)
    p_scen.add_argument("--mult", type=float, default=1.0, help="treatment multiplier (>= 1)")
    p_scen.set_defaults(func=cmd_scenario)

    p_sweep = sub.add_parser("sweep", help="sweep treatment-capacity multipliers")
    add_io(p_sweep, input_allowed=False)
    add_params(p_sweep)
    p_sweep.add_argument(
        "--mult",
        type=float,
        action="append",
        help="treatment multiplier, repeatable (default: 2 and 5)",
    )
    p_sweep.set_defaults(func=cmd_sweep, u=0.0, v=0.0)

    p_plot = sub.add_parser("plot", help="chart observed data and/or a model trajectory")
    add_io(p_plot)
    add_params(p_plot)
    add_policy(p_plot)
    p_plot.add_argument("--mult", type=float, default=1.0, help="treatment multiplier (>= 1)")
    p_plot.add_argument(
        "--series",
        choices=("cumulative", "daily", "both"),
        default="cumulative",
        help="which curves to draw",
    )
    p_plot.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CaseDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IntegrationOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
