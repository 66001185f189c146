"""Calibration and scenario analysis for a controlled logistic epidemic model."""

from .calibration import DEFAULT_INITIAL_GUESS, FitResult, GoodnessReport, fit, goodness_report
from .casedata import (
    CaseDataError,
    CaseSeries,
    ColumnSchema,
    cumulative_from_daily,
    daily_from_cumulative,
    parse_case_csv,
    series_to_csv,
    window,
)
from .model import (
    NO_CONTROLS,
    ControlPolicy,
    DerivedConstants,
    Equilibria,
    ModelParams,
    PeakEstimate,
    closed_form,
    derive_constants,
    equilibria,
    peak_incidence,
    rhs,
)
from .numerics import (
    DEFAULT_EPOCH,
    IntegrationOverflowError,
    MinimizeResult,
    OptimizerSettings,
    Trajectory,
    integrate_quadratic_rk4,
    integrate_rk4,
    nelder_mead,
    sse,
)
from .scenarios import (
    ScenarioReport,
    ScenarioSpec,
    avg_cumulative_reduction,
    compare_strategies,
    final_size_reduction,
    max_cumulative_reduction,
    model_trajectory,
    run_scenario,
    treatment_sweep,
)
from .svgchart import ChartStyle, emit_svg

__version__ = "0.1.0"
