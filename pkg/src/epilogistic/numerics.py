"""Numerical kernels: fixed-step RK4 integration, the least-squares
objective, and a Nelder-Mead simplex minimizer.

All routines are pure functions of their inputs; independent integrations
and optimizations can run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .kernels import STATE_LIMIT, rk4_quadratic

__all__ = [
    "DEFAULT_EPOCH",
    "Trajectory",
    "OptimizerSettings",
    "MinimizeResult",
    "IntegrationOverflowError",
    "integrate_rk4",
    "integrate_quadratic_rk4",
    "sse",
    "nelder_mead",
]

# First day of the 2022 US study window; index 0 of simulated trajectories.
DEFAULT_EPOCH = date(2022, 5, 10)


class IntegrationOverflowError(RuntimeError):
    """The integrated state left the admissible range [0, STATE_LIMIT]."""


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled cumulative-cases curve with derived daily incidence.

    daily[0] is defined as cumulative[0]; daily[i] = cumulative[i] -
    cumulative[i-1] for i >= 1.  step is the spacing of samples in days
    (1.0 for all trajectories produced by this package).
    """

    t0_epoch: date
    step: float
    cumulative: np.ndarray
    daily: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.t0_epoch == other.t0_epoch
            and self.step == other.step
            and np.array_equal(self.cumulative, other.cumulative)
            and np.array_equal(self.daily, other.daily)
        )

    @classmethod
    def from_cumulative(cls, t0_epoch: date, step: float, cumulative) -> "Trajectory":
        cum = np.asarray(cumulative, dtype=float)
        return cls(t0_epoch, step, cum, np.diff(cum, prepend=0.0))

    @property
    def days(self) -> np.ndarray:
        return np.arange(len(self.cumulative)) * self.step

    def dates(self) -> list[date]:
        return [self.t0_epoch + timedelta(days=round(i * self.step)) for i in range(len(self.cumulative))]

    def same_grid(self, other: "Trajectory") -> bool:
        return (
            self.t0_epoch == other.t0_epoch
            and self.step == other.step
            and len(self.cumulative) == len(other.cumulative)
        )


def _substeps_per_day(step: float) -> int:
    # Daily output samples require the internal step to divide one day; the
    # requested step is shrunk to the nearest such divisor.
    return max(1, math.ceil(1.0 / step - 1e-9))


def integrate_rk4(
    rate_function: Callable[[float], float],
    y0: float,
    horizon: float,
    step: float,
    t0_epoch: date = DEFAULT_EPOCH,
) -> Trajectory:
    """Classical fourth-order Runge-Kutta for an autonomous scalar ODE.

    Integrates dy/dt = rate_function(y) from y(0) = y0 over the horizon in
    days, with a fixed internal step, and returns the trajectory sampled on
    the one-day grid.  Raises IntegrationOverflowError if the state leaves
    [0, 1e12].
    """
    if not (isinstance(y0, (int, float)) and math.isfinite(y0)):
        raise ValueError(f"y0 must be finite, got {y0!r}")
    if not (math.isfinite(step) and step > 0.0):
        raise ValueError(f"step must be positive and finite, got {step!r}")
    if horizon < step:
        raise ValueError(f"horizon ({horizon}) must be at least one step ({step})")

    n_days = int(math.floor(horizon + 1e-9))
    substeps = _substeps_per_day(step)
    dt = 1.0 / substeps

    out = np.empty(n_days + 1, dtype=float)
    y = float(y0)
    out[0] = y
    for day in range(n_days):
        for _ in range(substeps):
            k1 = rate_function(y)
            k2 = rate_function(y + 0.5 * dt * k1)
            k3 = rate_function(y + 0.5 * dt * k2)
            k4 = rate_function(y + dt * k3)
            y = y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            if not (0.0 <= y <= STATE_LIMIT):
                raise IntegrationOverflowError(
                    f"state left [0, {STATE_LIMIT:g}] during day {day + 1} (y={y!r})"
                )
        out[day + 1] = y
    return Trajectory.from_cumulative(t0_epoch, 1.0, out)


def integrate_quadratic_rk4(
    a1: float,
    a2: float,
    a3: float,
    y0: float,
    horizon: float,
    step: float = 0.01,
    t0_epoch: date = DEFAULT_EPOCH,
) -> Trajectory:
    """RK4 specialised to dy/dt = a1*y*(1 - y/a2) + a3 (compiled kernel).

    Same contract as integrate_rk4; this is the fast path for the model's
    right-hand side (see the kernels module for backend selection).
    """
    if not (isinstance(y0, (int, float)) and math.isfinite(y0)):
        raise ValueError(f"y0 must be finite, got {y0!r}")
    if not (math.isfinite(step) and step > 0.0):
        raise ValueError(f"step must be positive and finite, got {step!r}")
    if horizon < step:
        raise ValueError(f"horizon ({horizon}) must be at least one step ({step})")

    n_days = int(math.floor(horizon + 1e-9))
    substeps = _substeps_per_day(step)
    out = np.empty(n_days + 1, dtype=float)
    status = rk4_quadratic(
        float(a1), float(a2), float(a3), float(y0), n_days, substeps, 1.0 / substeps, out
    )
    if status != 0:
        raise IntegrationOverflowError(f"state left [0, {STATE_LIMIT:g}]")
    return Trajectory.from_cumulative(t0_epoch, 1.0, out)


def sse(model_values, observed) -> float:
    """Sum of squared deviations between model values and observations."""
    m = np.asarray(model_values, dtype=float)
    o = np.asarray(observed, dtype=float)
    if m.shape != o.shape:
        raise ValueError(f"length mismatch: model {m.shape} vs observed {o.shape}")
    if m.size == 0:
        raise ValueError("sequences must be non-empty")
    d = m - o
    return float(np.dot(d, d))


@dataclass(frozen=True)
class OptimizerSettings:
    """Termination and initialisation knobs for nelder_mead.

    simplex_tolerance bounds the relative spread of objective values across
    the simplex; parameter_tolerance bounds the simplex diameter;
    initial_step_fractions sets the relative perturbation of each coordinate
    when building the starting simplex (a scalar applies to all).
    """

    max_iterations: int = 10_000
    simplex_tolerance: float = 1e-10
    parameter_tolerance: float = 1e-8
    initial_step_fractions: float | Sequence[float] = 0.1

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.simplex_tolerance > 0.0:
            raise ValueError(f"simplex_tolerance must be > 0, got {self.simplex_tolerance}")
        if not self.parameter_tolerance > 0.0:
            raise ValueError(f"parameter_tolerance must be > 0, got {self.parameter_tolerance}")


class MinimizeResult(NamedTuple):
    point: np.ndarray
    value: float
    iterations: int
    converged: bool
    reason: str  # "objective_spread", "simplex_size" or "max_iterations"


def _checked_eval(objective, point) -> float:
    value = float(objective(point))
    if not math.isfinite(value):
        raise ValueError(f"objective returned non-finite value {value!r} at {point.tolist()}")
    return value


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    initial_guess,
    settings: OptimizerSettings | None = None,
) -> MinimizeResult:
    """Minimise a scalar function with the Nelder-Mead simplex.

    Standard reflection/expansion/contraction/shrink steps.  Stops when the
    objective spread across the simplex falls below simplex_tolerance
    (relative to the best value), the simplex diameter falls below
    parameter_tolerance, or max_iterations is reached; the result records
    which.  Raises ValueError on a non-finite objective evaluation.
    """
    cfg = settings if settings is not None else OptimizerSettings()
    x0 = np.atleast_1d(np.asarray(initial_guess, dtype=float))
    n = x0.size
    fractions = np.broadcast_to(
        np.asarray(cfg.initial_step_fractions, dtype=float), (n,)
    )

    simplex = np.tile(x0, (n + 1, 1))
    for j in range(n):
        if simplex[j + 1, j] != 0.0:
            simplex[j + 1, j] *= 1.0 + fractions[j]
        else:
            simplex[j + 1, j] = fractions[j]
    values = np.array([_checked_eval(objective, p) for p in simplex])

    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    iterations = 0
    reason = "max_iterations"
    while iterations < cfg.max_iterations:
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]

        if values[-1] - values[0] <= cfg.simplex_tolerance * max(1.0, abs(values[0])):
            reason = "objective_spread"
            break
        if np.max(np.abs(simplex[1:] - simplex[0])) <= cfg.parameter_tolerance:
            reason = "simplex_size"
            break

        iterations += 1
        centroid = simplex[:-1].mean(axis=0)
        reflected = centroid + alpha * (centroid - simplex[-1])
        f_reflected = _checked_eval(objective, reflected)

        if f_reflected < values[0]:
            expanded = centroid + gamma * (reflected - centroid)
            f_expanded = _checked_eval(objective, expanded)
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
        elif f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
        else:
            if f_reflected < values[-1]:
                contracted = centroid + rho * (reflected - centroid)
            else:
                contracted = centroid + rho * (simplex[-1] - centroid)
            f_contracted = _checked_eval(objective, contracted)
            if f_contracted < min(f_reflected, values[-1]):
                simplex[-1], values[-1] = contracted, f_contracted
            else:
                for i in range(1, n + 1):
                    simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
                    values[i] = _checked_eval(objective, simplex[i])

    order = np.argsort(values, kind="stable")
    simplex, values = simplex[order], values[order]
    return MinimizeResult(
        point=simplex[0].copy(),
        value=float(values[0]),
        iterations=iterations,
        converged=reason != "max_iterations",
        reason=reason,
    )
