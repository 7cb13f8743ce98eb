"""Grid scenario series and curtailment-day selection.

Everything here operates on hourly series over one non-leap year (8760
values). Renewable output is reconstructed from capacity factors times
installed capacity, excess is the positive part of output minus non-EV
load, and days with any excess hour become candidates for shifting. Each
such day is paired with the next one in the year as its "actual" profile,
so a controller planning on day i's forecast is scored against the profile
that really materialises; the last day wraps around to the first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError

HOURS_PER_YEAR = 8760
HOURS_PER_DAY = 24
DAYS_PER_YEAR = HOURS_PER_YEAR // HOURS_PER_DAY


def validate_year_series(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size != HOURS_PER_YEAR:
        raise DataError(f"{name} must have {HOURS_PER_YEAR} hourly values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class InstalledCapacity:
    wind_mw: float
    solar_mw: float

    def __post_init__(self):
        if self.wind_mw < 0 or self.solar_mw < 0:
            raise DataError("installed capacities must be non-negative")


@dataclass(frozen=True)
class CurtailmentDay:
    """A day with excess renewables: the profile known a day ahead and the
    one that actually occurs."""

    day_index: int  # zero-based day of year
    forecast_excess: np.ndarray
    actual_excess: np.ndarray

    def __post_init__(self):
        if self.day_index < 0:
            raise DataError(f"day_index must be non-negative, got {self.day_index}")
        fc = np.asarray(self.forecast_excess, dtype=float).ravel()
        ac = np.asarray(self.actual_excess, dtype=float).ravel()
        if fc.size != HOURS_PER_DAY or ac.size != HOURS_PER_DAY:
            raise DataError("curtailment-day profiles must cover 24 hours")
        if np.any(fc < 0) or np.any(ac < 0):
            raise DataError("excess profiles must be non-negative")
        if not np.any(fc > 0):
            raise DataError("forecast profile must have at least one positive hour")
        object.__setattr__(self, "forecast_excess", fc)
        object.__setattr__(self, "actual_excess", ac)


def scale_series(series, factor: float) -> np.ndarray:
    """Multiply a series elementwise, e.g. load growth to a target year."""
    if factor < 0:
        raise DataError(f"scale factor must be non-negative, got {factor}")
    return np.asarray(series, dtype=float) * factor


def res_output_series(wind_cf, solar_cf, cap: InstalledCapacity) -> np.ndarray:
    """Hourly renewable output in MWh from capacity-factor series."""
    wind = np.asarray(wind_cf, dtype=float).ravel()
    solar = np.asarray(solar_cf, dtype=float).ravel()
    if wind.size != solar.size:
        raise DataError(f"capacity-factor lengths differ: {wind.size} vs {solar.size}")
    for name, arr in (("wind_cf", wind), ("solar_cf", solar)):
        if np.any(arr < 0) or np.any(arr > 1):
            raise DataError(f"{name} values must lie in [0, 1]")
    return wind * cap.wind_mw + solar * cap.solar_mw


def excess_res_series(res, non_ev_load) -> np.ndarray:
    """Renewable output beyond non-EV load, floored at zero."""
    r = np.asarray(res, dtype=float).ravel()
    load = np.asarray(non_ev_load, dtype=float).ravel()
    if r.size != load.size:
        raise DataError(f"series lengths differ: {r.size} vs {load.size}")
    return np.maximum(r - load, 0.0)


def pair_curtailment_days(excess) -> list[CurtailmentDay]:
    """Select days with any positive excess hour and pair each with the next.

    Returns days in calendar order. Day i's forecast is its own profile and
    its actual is the profile of the next selected day (cyclically), so the
    pairing is a rotation: forecasts and actuals are the same multiset.
    """
    arr = validate_year_series(excess, "excess")
    days = arr.reshape(DAYS_PER_YEAR, HOURS_PER_DAY)
    selected = np.flatnonzero((days > 0).any(axis=1))
    if selected.size == 0:
        return []
    result = []
    for pos, day_idx in enumerate(selected):
        nxt = selected[(pos + 1) % selected.size]
        result.append(
            CurtailmentDay(
                day_index=int(day_idx),
                forecast_excess=days[day_idx],
                actual_excess=days[nxt],
            )
        )
    return result
