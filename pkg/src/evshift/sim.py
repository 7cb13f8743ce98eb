"""Annual simulation: every scheme on every curtailment day, plus aggregates.

Aggregates follow the per-day additional-RES metric: the yearly total, the
fraction of days each scheme used the most RES (ties within 1e-6 MWh share
the win), and how often a scheme did worse than doing nothing. Totals are
kept in MWh; conversion to 3-significant-figure GWh happens only when text
is rendered, never inside the aggregates.

Days are independent, so they may be simulated in parallel; records are
assembled in day-index order either way, which keeps reports byte-identical
regardless of worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .control import DayResult, SchemeSpec, run_day
from .errors import ConfigError, DataError
from .fleet import FleetParams, build_bau_profile, fleet_daily_energy, project_fleet
from .grid import (
    CurtailmentDay,
    InstalledCapacity,
    excess_res_series,
    pair_curtailment_days,
    res_output_series,
    scale_series,
)

WIN_TIE_TOL_MWH = 1e-6


@dataclass(frozen=True)
class DayRecord:
    day_index: int
    results: tuple[DayResult, ...]  # one per scheme, in scheme order


@dataclass(frozen=True)
class SchemeAggregate:
    scheme: SchemeSpec
    total_additional_res_mwh: float
    win_fraction: float
    worse_than_bau_days: int


@dataclass(frozen=True)
class AnnualReport:
    schemes: tuple[SchemeSpec, ...]
    days: tuple[DayRecord, ...]
    aggregates: tuple[SchemeAggregate, ...]

    @property
    def curtailment_day_count(self) -> int:
        return len(self.days)


@dataclass(frozen=True)
class Scenario:
    """Everything run_year needs, derived from one dataset."""

    days: tuple[CurtailmentDay, ...]
    bau_profile: np.ndarray
    excess: np.ndarray
    ev_count: float
    daily_energy_mwh: float


def build_scenario(
    fleet_params: FleetParams,
    load_series,
    wind_cf,
    solar_cf,
    cap: InstalledCapacity,
    population_growth_factor: float,
) -> Scenario:
    """Derive the simulation-year inputs from raw dataset series."""
    projection = project_fleet(fleet_params)
    ev_count = float(projection.ev_counts[-1])
    daily = fleet_daily_energy(ev_count, fleet_params.km_per_ev_day, fleet_params.kwh_per_km)
    bau = build_bau_profile(daily, fleet_params.hourly_distribution)
    scaled_load = scale_series(load_series, population_growth_factor)
    res = res_output_series(wind_cf, solar_cf, cap)
    excess = excess_res_series(res, scaled_load)
    days = tuple(pair_curtailment_days(excess))
    return Scenario(
        days=days,
        bau_profile=bau,
        excess=excess,
        ev_count=ev_count,
        daily_energy_mwh=daily,
    )


def _simulate_day(day: CurtailmentDay, bau, schemes, lp_sink=None) -> DayRecord:
    results = tuple(run_day(scheme, day, bau, lp_sink) for scheme in schemes)
    return DayRecord(day_index=day.day_index, results=results)


def _simulate_day_star(args) -> DayRecord:
    return _simulate_day(*args)


def run_year(days, bau, schemes, parallel: int = 1, lp_sink=None) -> AnnualReport:
    """Simulate every scheme on every day and aggregate.

    `parallel` bounds concurrent day simulations; the report is identical for
    any value. An lp_sink forces serial execution since it is a callback into
    the caller's process.
    """
    schemes = tuple(schemes)
    if not schemes:
        raise ConfigError("at least one scheme is required")
    ordered = sorted(days, key=lambda d: d.day_index)

    if parallel > 1 and lp_sink is None and len(ordered) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            records = list(
                pool.map(
                    _simulate_day_star,
                    [(day, bau, schemes) for day in ordered],
                    chunksize=max(1, len(ordered) // (parallel * 4)),
                )
            )
    else:
        records = [_simulate_day(day, bau, schemes, lp_sink) for day in ordered]

    n_days = len(records)
    aggregates = []
    wins = np.zeros(len(schemes), dtype=int)
    for record in records:
        additional = np.array([r.additional_res_used for r in record.results])
        best = additional.max()
        wins += additional >= best - WIN_TIE_TOL_MWH
    for j, scheme in enumerate(schemes):
        per_day = [record.results[j].additional_res_used for record in records]
        aggregates.append(
            SchemeAggregate(
                scheme=scheme,
                total_additional_res_mwh=float(sum(per_day)),
                win_fraction=float(wins[j] / n_days) if n_days else 0.0,
                worse_than_bau_days=int(sum(1 for v in per_day if v < 0)),
            )
        )
    return AnnualReport(schemes=schemes, days=tuple(records), aggregates=tuple(aggregates))


def sample_day_table(report: AnnualReport, day_indices) -> list[dict]:
    """Per-day additional-RES rows for selected days, best scheme(s) flagged."""
    by_index = {record.day_index: record for record in report.days}
    rows = []
    for idx in day_indices:
        record = by_index.get(int(idx))
        if record is None:
            raise DataError(f"day {idx} is not a curtailment day in this report")
        values = {
            scheme.label: record.results[j].additional_res_used
            for j, scheme in enumerate(report.schemes)
        }
        best = max(values.values())
        rows.append(
            {
                "day_index": record.day_index,
                "additional_res_used_mwh": values,
                "best": [k for k, v in values.items() if v >= best - WIN_TIE_TOL_MWH],
            }
        )
    return rows


def format_gwh(mwh: float) -> str:
    """Render MWh as GWh with 3 significant figures."""
    gwh = mwh / 1000.0
    if gwh == 0 or not math.isfinite(gwh):
        return f"{gwh:g}"
    rounded = round(gwh, 2 - int(math.floor(math.log10(abs(gwh)))))
    return f"{rounded:g}"


def report_to_dict(report: AnnualReport, scenario_info: dict) -> dict:
    """Shape a report for JSON serialization."""
    schemes = [
        {
            "kind": agg.scheme.kind,
            "step_hours": agg.scheme.step_hours,
            "total_additional_res_mwh": agg.total_additional_res_mwh,
            "win_fraction": agg.win_fraction,
            "worse_than_bau_days": agg.worse_than_bau_days,
        }
        for agg in report.aggregates
    ]
    days = []
    for record in report.days:
        per_scheme = {}
        for j, scheme in enumerate(report.schemes):
            result = record.results[j]
            per_scheme[scheme.label] = {
                "realized_curtailment_mwh": result.realized_curtailment,
                "additional_res_used_mwh": result.additional_res_used,
            }
        days.append(
            {
                "day_index": record.day_index,
                "bau_curtailment_mwh": record.results[0].bau_curtailment
                if record.results
                else 0.0,
                "schemes": per_scheme,
            }
        )
    return {
        "scenario": dict(scenario_info),
        "curtailment_day_count": report.curtailment_day_count,
        "schemes": schemes,
        "days": days,
    }
