"""Controlled logistic growth model for cumulative epidemic case counts.

The model tracks cumulative cases y(t) under two constant-in-time control
efficacies and a treatment-capacity multiplier:

    dy/dt = (1-u) * r * y * (1 - y / a2) + (1-v) * h,    a2 = 1 / (m * gamma)

where r is the human-to-human transmission rate, h the zoonotic influx,
and 1/gamma the final epidemic size under baseline treatment capacity.
The right-hand side is quadratic in y, so the solution has an explicit
tanh form; this module evaluates it, its equilibria, and the incidence
peak it implies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "ModelParams",
    "ControlPolicy",
    "DerivedConstants",
    "Equilibria",
    "PeakEstimate",
    "NO_CONTROLS",
    "derive_constants",
    "rhs",
    "closed_form",
    "equilibria",
    "peak_incidence",
]


@dataclass(frozen=True)
class ModelParams:
    """Fitted model rates.

    r: human-to-human transmission rate (per day)
    gamma: treatment facility rate (per day); 1/gamma is the final size in persons
    h: zoonotic (animal-to-human) transmission rate (persons per day)
    """

    r: float
    gamma: float
    h: float

    def __post_init__(self):
        for name in ("r", "gamma", "h"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValueError(f"{name} must be a finite number, got {value!r}")
        if self.r <= 0.0:
            raise ValueError(f"r must be positive, got {self.r}")
        if self.gamma <= 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.h < 0.0:
            raise ValueError(f"h must be non-negative, got {self.h}")


@dataclass(frozen=True)
class ControlPolicy:
    """Constant control efficacies and treatment-capacity scaling.

    u scales down human-to-human transmission, v scales down the zoonotic
    influx (both in [0, 1]); treatment_multiplier >= 1 scales gamma, so a
    doubled capacity halves the carrying term.
    """

    u: float = 0.0
    v: float = 0.0
    treatment_multiplier: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.u <= 1.0):
            raise ValueError(f"u must lie in [0, 1], got {self.u}")
        if not (0.0 <= self.v <= 1.0):
            raise ValueError(f"v must lie in [0, 1], got {self.v}")
        if not (self.treatment_multiplier >= 1.0 and math.isfinite(self.treatment_multiplier)):
            raise ValueError(
                f"treatment_multiplier must be >= 1, got {self.treatment_multiplier}"
            )


NO_CONTROLS = ControlPolicy()


@dataclass(frozen=True)
class DerivedConstants:
    """Effective rates and the radical combinations of the tanh solution."""

    a1: float  # (1-u) * r
    a2: float  # 1 / (m * gamma), effective carrying term
    a3: float  # (1-v) * h
    b1: float  # sqrt(a1*a2 + 4*a3)
    b2: float  # sqrt(a1/a2)
    b3: float  # sqrt(a1*a2)


class Equilibria(NamedTuple):
    """Rest points of the right-hand side; xi1 >= xi2, xi1 the attained final size."""

    xi1: float
    xi2: float


class PeakEstimate(NamedTuple):
    """Incidence peak: day of peak, peak daily cases, cumulative cases at the peak.

    day <= 0 means the peak lies at or before the initial condition.
    """

    day: float
    daily_cases: float
    cumulative: float


def derive_constants(params: ModelParams, policy: ControlPolicy = NO_CONTROLS) -> DerivedConstants:
    """Effective rates under a policy, plus the radicals of the tanh solution."""
    a1 = (1.0 - policy.u) * params.r
    a2 = 1.0 / (policy.treatment_multiplier * params.gamma)
    a3 = (1.0 - policy.v) * params.h
    return DerivedConstants(
        a1=a1,
        a2=a2,
        a3=a3,
        b1=math.sqrt(a1 * a2 + 4.0 * a3),
        b2=math.sqrt(a1 / a2),
        b3=math.sqrt(a1 * a2),
    )


def rhs(y, params: ModelParams, policy: ControlPolicy = NO_CONTROLS):
    """Rate of new cases at cumulative level y (persons per day).

    Total quadratic in y; accepts scalars or arrays.
    """
    c = derive_constants(params, policy)
    return c.a1 * y * (1.0 - y / c.a2) + c.a3


def equilibria(params: ModelParams, policy: ControlPolicy = NO_CONTROLS) -> Equilibria:
    """Roots of the right-hand side.

    Undefined when u = 1 (the quadratic degenerates to a constant influx).
    """
    if policy.u >= 1.0:
        raise ValueError("equilibria are undefined for u = 1 (no quadratic term)")
    c = derive_constants(params, policy)
    if c.a3 == 0.0:
        # no influx: plain logistic rest points, exact
        return Equilibria(xi1=c.a2, xi2=0.0)
    spread = c.b1 * c.b3
    return Equilibria(
        xi1=(c.a1 * c.a2 + spread) / (2.0 * c.a1),
        xi2=(c.a1 * c.a2 - spread) / (2.0 * c.a1),
    )


def _time_shift(c: DerivedConstants, y0: float) -> float:
    """Time at which the solution crosses a2/2, for the trajectory through y(0) = y0."""
    k = 0.5 * c.b1 * c.b2
    return math.atanh((c.a2 - 2.0 * y0) * c.b2 / c.b1) / k


def closed_form(t, y0: float, params: ModelParams, policy: ControlPolicy = NO_CONTROLS):
    """Exact cumulative cases at time t (days) for the trajectory with y(0) = y0.

    y(t) = a2/2 + (b1 / (2*b2)) * tanh(k * (t - t_star)), k = b1*b2/2, with
    t_star anchored so the initial condition holds.  Requires u < 1 and y0
    strictly between the equilibria (the growing branch).  Accepts scalar or
    array t and returns the matching shape.
    """
    if policy.u >= 1.0:
        raise ValueError(
            "closed form degenerates for u = 1; integrate the right-hand side instead"
        )
    eq = equilibria(params, policy)
    if not (eq.xi2 < y0 < eq.xi1):
        raise ValueError(
            f"y0 must lie strictly between the equilibria ({eq.xi2:.6g}, {eq.xi1:.6g}), got {y0}"
        )
    c = derive_constants(params, policy)
    k = 0.5 * c.b1 * c.b2
    t_star = _time_shift(c, y0)
    t_arr = np.asarray(t, dtype=float)
    result = 0.5 * c.a2 + (c.b1 / (2.0 * c.b2)) * np.tanh(k * (t_arr - t_star))
    return float(result) if t_arr.ndim == 0 else result


def peak_incidence(
    params: ModelParams, policy: ControlPolicy = NO_CONTROLS, y0: float = 1.0
) -> PeakEstimate:
    """Timing and size of the daily-incidence peak.

    Daily incidence is maximal at the inflection y = a2/2, where it equals
    a1*a2/4 + a3.  A non-positive day reports that the trajectory started at
    or beyond the inflection.  Requires u < 1: with the quadratic term gone
    the incidence is a constant influx with no interior maximum.
    """
    if policy.u >= 1.0:
        raise ValueError("no incidence peak for u = 1 (constant influx only)")
    eq = equilibria(params, policy)
    if not (eq.xi2 < y0 < eq.xi1):
        raise ValueError(
            f"y0 must lie strictly between the equilibria ({eq.xi2:.6g}, {eq.xi1:.6g}), got {y0}"
        )
    c = derive_constants(params, policy)
    return PeakEstimate(
        day=_time_shift(c, y0),
        daily_cases=c.a1 * c.a2 / 4.0 + c.a3,
        cumulative=0.5 * c.a2,
    )
