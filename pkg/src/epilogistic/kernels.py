"""Hot numeric kernels.

The fixed-step RK4 loop below dominates runtime for fine integration steps
(the default cross-check step of 0.01 day runs 23,600 steps over a 236-day
horizon), so it is compiled with numba when available.  Setting the
environment variable ``EPILOGISTIC_NUMBA=0`` before import selects the
uncompiled fallback with identical semantics; ``benchmarks/rk4_speed.py``
compares the two paths.
"""

from __future__ import annotations

import os

__all__ = ["rk4_quadratic", "backend"]

STATE_LIMIT = 1.0e12


def _numba_requested() -> bool:
    return os.environ.get("EPILOGISTIC_NUMBA", "1").lower() not in ("0", "false", "off")


def _rk4_quadratic(a1, a2, a3, y0, n_days, substeps, dt, out):
    # Classical RK4 on dy/dt = a1*y*(1 - y/a2) + a3, sampled once per day
    # into out (length n_days + 1).  Returns 0 on success, 1 if the state
    # leaves [0, STATE_LIMIT] (NaN included: the comparison fails).
    y = y0
    out[0] = y
    for day in range(n_days):
        for _ in range(substeps):
            k1 = a1 * y * (1.0 - y / a2) + a3
            ym = y + 0.5 * dt * k1
            k2 = a1 * ym * (1.0 - ym / a2) + a3
            ym = y + 0.5 * dt * k2
            k3 = a1 * ym * (1.0 - ym / a2) + a3
            ye = y + dt * k3
            k4 = a1 * ye * (1.0 - ye / a2) + a3
            y = y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            if not (0.0 <= y <= STATE_LIMIT):
                return 1
        out[day + 1] = y
    return 0


if _numba_requested():
    try:
        from numba import njit

        rk4_quadratic = njit(cache=True)(_rk4_quadratic)
        _BACKEND = "numba"
    except ImportError:
        rk4_quadratic = _rk4_quadratic
        _BACKEND = "python"
else:
    rk4_quadratic = _rk4_quadratic
    _BACKEND = "python"


def backend() -> str:
    """Active kernel backend: "numba" or "python"."""
    return _BACKEND
