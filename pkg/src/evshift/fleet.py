"""EV fleet projection and the business-as-usual charging profile.

Fleet size evolves year over year as a blend of retirement and new sales:

    EVt_n = ((R - 1) / R) * EVt_{n-1} + MS_n * LDV_n / R

where R is the average vehicle lifetime in years, LDV_n the total light-duty
vehicle count in year n, and MS_n the EV market share of new sales, linearly
interpolated between configured anchor points. The projected count converts
to a daily charging energy (km/day times kWh/km) which an hourly
distribution spreads into the 24-hour uncontrolled demand profile.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError

HOURS_PER_DAY = 24
DISTRIBUTION_SUM_TOL = 1e-9


def market_share_at(points, year: int) -> float:
    """Market share at `year`: linear between anchors, constant outside."""
    pts = sorted((int(y), float(s)) for y, s in points)
    if not pts:
        raise ConfigError("market_share_points must contain at least one anchor")
    years = np.array([y for y, _ in pts], dtype=float)
    shares = np.array([s for _, s in pts], dtype=float)
    return float(np.interp(float(year), years, shares))


@dataclass(frozen=True)
class FleetParams:
    start_year: int
    end_year: int
    initial_ev_count: float
    ldv_total_by_year: dict[int, float]
    market_share_points: tuple[tuple[int, float], ...]
    lifetime_r: int
    km_per_ev_day: float
    kwh_per_km: float
    hourly_distribution: np.ndarray = field(
        default_factory=lambda: np.full(HOURS_PER_DAY, 1.0 / HOURS_PER_DAY)
    )

    def __post_init__(self):
        if self.end_year < self.start_year:
            raise ConfigError(
                f"end_year {self.end_year} precedes start_year {self.start_year}"
            )
        if int(self.lifetime_r) != self.lifetime_r or self.lifetime_r < 1:
            raise ConfigError(f"lifetime_r must be a positive integer, got {self.lifetime_r}")
        if self.initial_ev_count < 0:
            raise ConfigError("initial_ev_count must be non-negative")
        if self.km_per_ev_day < 0 or self.kwh_per_km < 0:
            raise ConfigError("km_per_ev_day and kwh_per_km must be non-negative")

        ldv = {int(y): float(c) for y, c in self.ldv_total_by_year.items()}
        if any(c < 0 for c in ldv.values()):
            raise ConfigError("ldv_total_by_year counts must be non-negative")
        missing = [y for y in range(self.start_year + 1, self.end_year + 1) if y not in ldv]
        if missing:
            raise ConfigError(f"ldv_total_by_year missing years: {missing}")

        points = tuple((int(y), float(s)) for y, s in self.market_share_points)
        if not points:
            raise ConfigError("market_share_points must not be empty")
        anchor_years = [y for y, _ in points]
        if any(b <= a for a, b in zip(anchor_years, anchor_years[1:])):
            raise ConfigError("market-share anchor years must be strictly increasing")
        if any(not 0.0 <= s <= 1.0 for _, s in points):
            raise ConfigError("market-share fractions must lie in [0, 1]")

        dist = np.asarray(self.hourly_distribution, dtype=float).ravel()
        if dist.size != HOURS_PER_DAY:
            raise ConfigError(f"hourly_distribution must have {HOURS_PER_DAY} entries")
        if np.any(dist < 0):
            raise ConfigError("hourly_distribution entries must be non-negative")
        if abs(dist.sum() - 1.0) > DISTRIBUTION_SUM_TOL:
            raise ConfigError(
                f"hourly_distribution sums to {dist.sum()!r}, expected 1 within "
                f"{DISTRIBUTION_SUM_TOL}"
            )

        object.__setattr__(self, "ldv_total_by_year", ldv)
        object.__setattr__(self, "market_share_points", points)
        object.__setattr__(self, "lifetime_r", int(self.lifetime_r))
        object.__setattr__(self, "hourly_distribution", dist)


@dataclass(frozen=True)
class FleetProjection:
    years: np.ndarray
    ev_counts: np.ndarray
    market_shares: np.ndarray

    def count_for(self, year: int) -> float:
        idx = np.flatnonzero(self.years == year)
        if idx.size == 0:
            raise DataError(f"year {year} outside projection range")
        return float(self.ev_counts[idx[0]])


def project_fleet(params: FleetParams) -> FleetProjection:
    """Run the retirement/sales recurrence from start_year to end_year."""
    years = np.arange(params.start_year, params.end_year + 1)
    counts = np.zeros(years.size)
    shares = np.array([market_share_at(params.market_share_points, y) for y in years])
    counts[0] = params.initial_ev_count
    r = float(params.lifetime_r)
    for i, year in enumerate(years[1:], start=1):
        ldv_n = params.ldv_total_by_year[int(year)]
        counts[i] = (r - 1.0) / r * counts[i - 1] + shares[i] * ldv_n / r
    return FleetProjection(years=years, ev_counts=counts, market_shares=shares)


def fleet_daily_energy(ev_count: float, km_per_ev_day: float, kwh_per_km: float) -> float:
    """Daily fleet charging energy in MWh."""
    if ev_count < 0 or km_per_ev_day < 0 or kwh_per_km < 0:
        raise DataError("fleet energy inputs must be non-negative")
    return ev_count * km_per_ev_day * kwh_per_km / 1000.0


def build_bau_profile(daily_mwh: float, distribution) -> np.ndarray:
    """Spread one day's energy over 24 hours by the given fractions."""
    dist = np.asarray(distribution, dtype=float).ravel()
    if dist.size != HOURS_PER_DAY:
        raise DataError(f"distribution must have {HOURS_PER_DAY} entries, got {dist.size}")
    if np.any(dist < 0):
        raise DataError("distribution entries must be non-negative")
    if abs(dist.sum() - 1.0) > DISTRIBUTION_SUM_TOL:
        raise DataError(f"distribution sums to {dist.sum()!r}, expected 1")
    if daily_mwh < 0:
        raise DataError("daily energy must be non-negative")
    return daily_mwh * dist
