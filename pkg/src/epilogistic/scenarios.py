"""Intervention scenario analysis: baseline-vs-policy trajectory comparisons.

Three named strategies mirror the study design: strategy 1 applies the
human-to-human control alone (u), strategy 2 the zoonotic control alone
(v), strategy 3 both at once.  A separate sweep scales treatment capacity.
"on average" percentages are operationalised as the mean over the daily
grid (days 1..horizon) of the pointwise relative cumulative reduction;
this definition reproduces the published desk-scale numbers, while plain
final-size reduction does not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from typing import Sequence

import numpy as np

from .model import ControlPolicy, ModelParams, NO_CONTROLS, closed_form, derive_constants
from .numerics import DEFAULT_EPOCH, Trajectory, integrate_quadratic_rk4

__all__ = [
    "ScenarioSpec",
    "ScenarioReport",
    "model_trajectory",
    "run_scenario",
    "avg_cumulative_reduction",
    "max_cumulative_reduction",
    "final_size_reduction",
    "compare_strategies",
    "treatment_sweep",
    "report_to_json",
    "report_to_csv",
]


@dataclass(frozen=True)
class ScenarioSpec:
    """One labelled what-if run: a policy, a horizon in days and a start level."""

    label: str
    policy: ControlPolicy
    horizon: int = 236
    y0: float = 1.0

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1 day, got {self.horizon}")


@dataclass(frozen=True)
class ScenarioReport:
    """Baseline-vs-scenario comparison on a shared daily grid.

    Reductions are fractions of the baseline; they may be negative on
    sub-windows and are reported as-is.  final_size_reduction compares the
    last grid day; avg/max_cumulative_reduction summarise the pointwise
    relative reduction over days 1..horizon.
    """

    label: str
    policy: ControlPolicy
    baseline: Trajectory
    scenario: Trajectory
    avg_cumulative_reduction: float
    max_cumulative_reduction: float
    final_size_reduction: float
    peak_day_baseline: int
    peak_day_scenario: int
    peak_daily_baseline: float
    peak_daily_scenario: float


def model_trajectory(
    params: ModelParams,
    policy: ControlPolicy,
    y0: float,
    horizon: int,
    t0_epoch: date = DEFAULT_EPOCH,
) -> Trajectory:
    """Daily cumulative trajectory over 0..horizon days.

    Uses the exact tanh solution; at u = 1, where that form degenerates,
    falls back to RK4 on the (still well-defined) right-hand side.
    """
    if policy.u >= 1.0:
        c = derive_constants(params, policy)
        return integrate_quadratic_rk4(c.a1, c.a2, c.a3, y0, horizon, t0_epoch=t0_epoch)
    days = np.arange(int(horizon) + 1, dtype=float)
    return Trajectory.from_cumulative(
        t0_epoch, 1.0, closed_form(days, y0, params, policy)
    )


def _require_same_grid(baseline: Trajectory, scenario: Trajectory) -> None:
    if not baseline.same_grid(scenario):
        raise ValueError("baseline and scenario trajectories are on different grids")


def _pointwise_reductions(baseline: Trajectory, scenario: Trajectory) -> np.ndarray:
    _require_same_grid(baseline, scenario)
    base = baseline.cumulative[1:]
    if np.any(base <= 0.0):
        raise ValueError("baseline cumulative must be strictly positive from day 1 onward")
    return 1.0 - scenario.cumulative[1:] / base


def avg_cumulative_reduction(baseline: Trajectory, scenario: Trajectory) -> float:
    """Mean over grid days 1..N of the relative cumulative reduction."""
    return float(np.mean(_pointwise_reductions(baseline, scenario)))


def max_cumulative_reduction(baseline: Trajectory, scenario: Trajectory) -> float:
    """Largest single-day relative cumulative reduction over days 1..N."""
    return float(np.max(_pointwise_reductions(baseline, scenario)))


def final_size_reduction(baseline: Trajectory, scenario: Trajectory) -> float:
    _require_same_grid(baseline, scenario)
    final = baseline.cumulative[-1]
    if final <= 0.0:
        raise ValueError("baseline final size must be strictly positive")
    return float(1.0 - scenario.cumulative[-1] / final)


def _grid_peak(trajectory: Trajectory) -> tuple[int, float]:
    i = int(np.argmax(trajectory.daily))
    return i, float(trajectory.daily[i])


def run_scenario(params: ModelParams, spec: ScenarioSpec) -> ScenarioReport:
    """Evaluate one policy against the no-controls baseline on a shared grid."""
    baseline = model_trajectory(params, NO_CONTROLS, spec.y0, spec.horizon)
    scenario = model_trajectory(params, spec.policy, spec.y0, spec.horizon)
    peak_day_base, peak_daily_base = _grid_peak(baseline)
    peak_day_scen, peak_daily_scen = _grid_peak(scenario)
    return ScenarioReport(
        label=spec.label,
        policy=spec.policy,
        baseline=baseline,
        scenario=scenario,
        avg_cumulative_reduction=avg_cumulative_reduction(baseline, scenario),
        max_cumulative_reduction=max_cumulative_reduction(baseline, scenario),
        final_size_reduction=final_size_reduction(baseline, scenario),
        peak_day_baseline=peak_day_base,
        peak_day_scenario=peak_day_scen,
        peak_daily_baseline=peak_daily_base,
        peak_daily_scenario=peak_daily_scen,
    )


def compare_strategies(
    params: ModelParams, efficacy: float, horizon: int = 236, y0: float = 1.0
) -> list[ScenarioReport]:
    """Run strategies 1-3 at one efficacy and rank them.

    Ordered by avg_cumulative_reduction descending, ties broken by
    final_size_reduction descending.
    """
    if not (0.0 < efficacy < 1.0):
        raise ValueError(f"efficacy must lie strictly inside (0, 1), got {efficacy}")
    specs = [
        ScenarioSpec("strategy-1", ControlPolicy(u=efficacy), horizon, y0),
        ScenarioSpec("strategy-2", ControlPolicy(v=efficacy), horizon, y0),
        ScenarioSpec("strategy-3", ControlPolicy(u=efficacy, v=efficacy), horizon, y0),
    ]
    reports = [run_scenario(params, spec) for spec in specs]
    return sorted(
        reports,
        key=lambda rep: (rep.avg_cumulative_reduction, rep.final_size_reduction),
        reverse=True,
    )


def treatment_sweep(
    params: ModelParams,
    multipliers: Sequence[float],
    horizon: int = 236,
    y0: float = 1.0,
) -> list[ScenarioReport]:
    """One baseline comparison per treatment-capacity multiplier (controls off)."""
    for m in multipliers:
        if m < 1.0:
            raise ValueError(f"treatment multipliers must be >= 1, got {m}")
    return [
        run_scenario(
            params,
            ScenarioSpec(
                f"treatment-x{m:g}",
                ControlPolicy(treatment_multiplier=m),
                horizon,
                y0,
            ),
        )
        for m in multipliers
    ]


def report_to_json(report: ScenarioReport) -> str:
    doc = {
        "label": report.label,
        "policy": {
            "u": report.policy.u,
            "v": report.policy.v,
            "treatment_multiplier": report.policy.treatment_multiplier,
        },
        "horizon": len(report.baseline.cumulative) - 1,
        "avg_cumulative_reduction": report.avg_cumulative_reduction,
        "max_cumulative_reduction": report.max_cumulative_reduction,
        "final_size_reduction": report.final_size_reduction,
        "peak_day_baseline": report.peak_day_baseline,
        "peak_day_scenario": report.peak_day_scenario,
        "peak_daily_baseline": report.peak_daily_baseline,
        "peak_daily_scenario": report.peak_daily_scenario,
        "final_cumulative_baseline": float(report.baseline.cumulative[-1]),
        "final_cumulative_scenario": float(report.scenario.cumulative[-1]),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_to_csv(report: ScenarioReport) -> str:
    """Two-trajectory CSV: day, date, then cumulative and daily for both runs."""
    lines = [
        "day,date,baseline_cumulative,scenario_cumulative,baseline_daily,scenario_daily"
    ]
    dates = report.baseline.dates()
    for i in range(len(report.baseline.cumulative)):
        lines.append(
            f"{i},{dates[i].isoformat()},"
            f"{float(report.baseline.cumulative[i])!r},{float(report.scenario.cumulative[i])!r},"
            f"{float(report.baseline.daily[i])!r},{float(report.scenario.daily[i])!r}"
        )
    return "\n".join(lines) + "\n"
