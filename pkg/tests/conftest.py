import numpy as np
import pytest

from epilogistic import ModelParams, closed_form
from epilogistic.casedata import CaseSeries


@pytest.fixture
def us_params():
    """Published rates from the 2022 US fit; the reference baseline everywhere."""
    return ModelParams(r=0.06, gamma=3.4e-5, h=5.99)


def synthetic_series(params: ModelParams, n_days: int = 236, y0: float = 1.0) -> CaseSeries:
    """Noiseless integer case series generated from the exact solution."""
    from datetime import date, timedelta

    times = np.arange(n_days, dtype=float)
    cumulative = np.round(closed_form(times, y0, params)).astype(np.int64)
    dates = tuple(date(2022, 5, 10) + timedelta(days=i) for i in range(n_days))
    daily = np.diff(cumulative, prepend=np.int64(0))
    return CaseSeries(dates=dates, daily=daily, cumulative=cumulative)


@pytest.fixture
def us_series(us_params):
    return synthetic_series(us_params)
