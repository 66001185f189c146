"""Acceptance gate.

Each test checks one acceptance criterion at its stated tolerance and prints
one pass/fail line (run with ``pytest -s`` to see the lines).  Criterion 8
additionally fits the real 236-day US series when the environment variable
EPILOGISTIC_US_CASES points at a case CSV; otherwise the synthetic
self-consistency check alone gates acceptance.
"""

import contextlib
import json
import os
import time
from pathlib import Path

import numpy as np
import pytest

from epilogistic import (
    ControlPolicy,
    ModelParams,
    NO_CONTROLS,
    OptimizerSettings,
    closed_form,
    compare_strategies,
    derive_constants,
    equilibria,
    fit,
    integrate_quadratic_rk4,
    nelder_mead,
    parse_case_csv,
    peak_incidence,
    rhs,
    run_scenario,
    series_to_csv,
    treatment_sweep,
)
from epilogistic.cli import main as cli_main
from epilogistic.scenarios import ScenarioSpec

from conftest import synthetic_series

US_PARAMS = ModelParams(r=0.06, gamma=3.4e-5, h=5.99)


@contextlib.contextmanager
def criterion(number: int, title: str):
    try:
        yield
    except Exception:
        print(f"criterion {number:02d} {title}: FAIL")
        raise
    print(f"criterion {number:02d} {title}: PASS")


def test_01_closed_form_ode_equivalence():
    c = derive_constants(US_PARAMS, NO_CONTROLS)
    integrate_quadratic_rk4(c.a1, c.a2, c.a3, 1.0, 5, step=0.01)  # warm the kernel
    with criterion(1, "closed-form/ODE equivalence (<1e-6 rel, <1s)"):
        start = time.perf_counter()
        traj = integrate_quadratic_rk4(c.a1, c.a2, c.a3, 1.0, 236, step=0.01)
        exact = closed_form(traj.days, 1.0, US_PARAMS)
        deviation = float(np.max(np.abs(traj.cumulative - exact) / exact))
        elapsed = time.perf_counter() - start
        assert deviation < 1e-6, f"max relative deviation {deviation:.3e}"
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_02_peak_reproduction():
    with criterion(2, "peak size/timing vs published account"):
        peak = peak_incidence(US_PARAMS, NO_CONTROLS, y0=1.0)
        assert abs(peak.daily_cases - 450.0) / 450.0 < 0.02, peak.daily_cases
        assert abs(peak.cumulative - 15_000.0) / 15_000.0 < 0.05, peak.cumulative
        assert 85 <= peak.day <= 105, peak.day

        # independent route: argmax of finite-difference incidence on RK4
        c = derive_constants(US_PARAMS, NO_CONTROLS)
        traj = integrate_quadratic_rk4(c.a1, c.a2, c.a3, 1.0, 236, step=0.01)
        daily = np.diff(traj.cumulative)
        grid_peak_day = int(np.argmax(daily)) + 1
        assert 85 <= grid_peak_day <= 105, grid_peak_day
        assert float(np.max(daily)) == pytest.approx(peak.daily_cases, rel=0.01)


def test_03_final_size():
    with criterion(3, "final size near thirty thousand"):
        final = closed_form(236.0, 1.0, US_PARAMS)
        assert abs(final - 30_000.0) / 30_000.0 < 0.05, final


def test_04_control_1_strong_scenario():
    with criterion(4, "u=0.8 final-size reduction in [0.73, 0.83]"):
        report = run_scenario(US_PARAMS, ScenarioSpec("u=0.8", ControlPolicy(u=0.8)))
        assert 0.73 <= report.final_size_reduction <= 0.83, report.final_size_reduction


def test_05_average_reduction_table():
    table = [
        ("u=0.4", ControlPolicy(u=0.4), 0.38),
        ("v=0.4", ControlPolicy(v=0.4), 0.17),
        ("u=v=0.4", ControlPolicy(u=0.4, v=0.4), 0.52),
        ("u=v=0.8", ControlPolicy(u=0.8, v=0.8), 0.95),
        ("mult=2", ControlPolicy(treatment_multiplier=2.0), 0.31),
        ("mult=5", ControlPolicy(treatment_multiplier=5.0), 0.55),
    ]
    with criterion(5, "average-reduction table within 8 points (<5s)"):
        start = time.perf_counter()
        for label, policy, expected in table:
            report = run_scenario(US_PARAMS, ScenarioSpec(label, policy))
            assert abs(report.avg_cumulative_reduction - expected) <= 0.08, (
                f"{label}: mean={report.avg_cumulative_reduction:.4f} "
                f"max={report.max_cumulative_reduction:.4f} expected~{expected}"
            )
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"took {elapsed:.3f}s"


def test_06_strategy_ordering():
    with criterion(6, "strategy ranking 3 > 1 > 2 at 0.4 and 0.8"):
        for efficacy in (0.4, 0.8):
            ranked = compare_strategies(US_PARAMS, efficacy)
            assert [r.label for r in ranked] == [
                "strategy-3",
                "strategy-1",
                "strategy-2",
            ], [r.label for r in ranked]


def test_07_peak_shift_directions():
    with criterion(7, "controls delay the peak, treatment advances it"):
        for policy in (ControlPolicy(u=0.4), ControlPolicy(v=0.4)):
            report = run_scenario(US_PARAMS, ScenarioSpec("ctl", policy))
            assert report.peak_day_scenario > report.peak_day_baseline, policy
        for m in (2.0, 5.0):
            report = run_scenario(
                US_PARAMS, ScenarioSpec("trt", ControlPolicy(treatment_multiplier=m))
            )
            assert report.peak_day_scenario < report.peak_day_baseline, m


def _check_published_account(params: ModelParams):
    """Criteria 2-3 evaluated from a fitted parameter set."""
    peak = peak_incidence(params, NO_CONTROLS, y0=1.0)
    assert abs(peak.daily_cases - 450.0) / 450.0 < 0.02, peak.daily_cases
    assert abs(peak.cumulative - 15_000.0) / 15_000.0 < 0.05, peak.cumulative
    assert 85 <= peak.day <= 105, peak.day
    final = closed_form(236.0, 1.0, params)
    assert abs(final - 30_000.0) / 30_000.0 < 0.05, final


def test_08_calibration_self_consistency():
    real_csv = os.environ.get("EPILOGISTIC_US_CASES", "")
    with criterion(8, "calibration recovers generating parameters"):
        result = fit(synthetic_series(US_PARAMS))
        assert result.converged
        assert result.params.r == pytest.approx(US_PARAMS.r, rel=0.01)
        assert result.params.gamma == pytest.approx(US_PARAMS.gamma, rel=0.01)
        assert result.params.h == pytest.approx(US_PARAMS.h, rel=0.01)

        if real_csv and Path(real_csv).exists():
            from epilogistic.cli import _detect_schema

            content = Path(real_csv).read_bytes()
            series = parse_case_csv(content, _detect_schema(content))
            real = fit(series, restarts=5)
            for got, want in (
                (real.params.r, US_PARAMS.r),
                (real.params.gamma, US_PARAMS.gamma),
                (real.params.h, US_PARAMS.h),
            ):
                assert 0.5 <= got / want <= 2.0, (got, want)
            _check_published_account(real.params)


def test_09_equilibrium_checks():
    with criterion(9, "right-hand side vanishes at the equilibria"):
        for policy in (NO_CONTROLS, ControlPolicy(u=0.4, v=0.2, treatment_multiplier=2.0)):
            eq = equilibria(US_PARAMS, policy)
            c = derive_constants(US_PARAMS, policy)
            scale = c.a1 * abs(eq.xi1) + c.a3
            assert abs(rhs(eq.xi1, US_PARAMS, policy)) / scale < 1e-9
            assert abs(rhs(eq.xi2, US_PARAMS, policy)) / scale < 1e-9

        no_influx = ModelParams(r=0.06, gamma=3.4e-5, h=0.0)
        eq = equilibria(no_influx)
        assert eq.xi1 == 1.0 / no_influx.gamma
        assert eq.xi2 == 0.0


def test_10_numerics_kernels():
    with criterion(10, "Rosenbrock minimum and fourth-order step contraction"):
        rosen = lambda x: (1.0 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2
        result = nelder_mead(rosen, [-1.2, 1.0], OptimizerSettings(max_iterations=5000))
        assert np.max(np.abs(result.point - 1.0)) < 1e-3, result.point

        c = derive_constants(US_PARAMS, NO_CONTROLS)
        exact = closed_form(np.arange(237.0), 1.0, US_PARAMS)

        def max_error(step):
            traj = integrate_quadratic_rk4(c.a1, c.a2, c.a3, 1.0, 236, step)
            return float(np.max(np.abs(traj.cumulative - exact)))

        contraction = max_error(1.0) / max_error(0.5)
        assert contraction >= 12.0, contraction


def test_11_output_determinism(tmp_path, us_params):
    with criterion(11, "byte-identical artifacts across repeated runs"):
        cases = tmp_path / "cases.csv"
        cases.write_text(series_to_csv(synthetic_series(us_params)), encoding="utf-8")
        params = ["--r", "0.06", "--gamma", "0.000034", "--h", "5.99"]
        commands = {
            "fit": ["fit", "--input", str(cases), "--plot"],
            "simulate": ["simulate", *params, "--plot"],
            "scenario": ["scenario", *params, "--u", "0.4", "--plot"],
            "sweep": ["sweep", *params, "--plot"],
            "plot": ["plot", "--input", str(cases), *params],
        }
        for name, argv in commands.items():
            first = tmp_path / name / "a"
            second = tmp_path / name / "b"
            assert cli_main([*argv, "--output", str(first)]) == 0
            assert cli_main([*argv, "--output", str(second)]) == 0
            produced = sorted(p.name for p in first.iterdir())
            assert produced == sorted(p.name for p in second.iterdir())
            assert produced, f"{name} wrote nothing"
            for artifact in produced:
                assert (first / artifact).read_bytes() == (second / artifact).read_bytes(), (
                    f"{name}/{artifact} differs between runs"
                )
