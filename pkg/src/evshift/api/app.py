"""HTTP service exposing the core library.

Thin wrapper: pydantic models validate shapes at the boundary, domain rules
stay in the core constructors. Domain validation failures map to 400,
solver failures to 500. Run with `uvicorn evshift.api:app`.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, dataio
from ..control import SchemeSpec, run_day
from ..errors import EvShiftError, SolverError
from ..fleet import FleetParams, fleet_daily_energy, project_fleet
from ..grid import (
    CurtailmentDay,
    InstalledCapacity,
    excess_res_series,
    pair_curtailment_days,
    res_output_series,
    scale_series,
)
from ..optimizer import ShiftInstance, build_shift_lp, extract_plan, solve_lp
from ..sim import run_year
from . import schemas

app = FastAPI(title="evshift", version=__version__)


@app.exception_handler(EvShiftError)
async def _domain_error(request: Request, exc: EvShiftError) -> JSONResponse:
    status = 500 if isinstance(exc, SolverError) else 400
    return JSONResponse(status_code=status, content={"detail": str(exc)})


def _fleet_params(config: schemas.FleetConfigModel | None) -> FleetParams:
    if config is None:
        return dataio.read_fleet_config(dataio.bundled_path("fleet_config.json"))
    return FleetParams(
        start_year=config.start_year,
        end_year=config.end_year,
        initial_ev_count=config.initial_ev_count,
        ldv_total_by_year=dict(config.ldv_total_by_year),
        market_share_points=tuple(tuple(p) for p in config.market_share_points),
        lifetime_r=config.lifetime_r,
        km_per_ev_day=config.km_per_ev_day,
        kwh_per_km=config.kwh_per_km,
    )


def _scheme_spec(model: schemas.SchemeModel, p_max: float) -> SchemeSpec:
    effective = 0.0 if model.kind == "bau" else p_max
    return SchemeSpec(model.kind, model.step_hours, effective)


def _curtailment_day(model: schemas.DayModel) -> CurtailmentDay:
    return CurtailmentDay(
        day_index=model.day_index,
        forecast_excess=np.asarray(model.forecast_excess_mwh, dtype=float),
        actual_excess=np.asarray(model.actual_excess_mwh, dtype=float),
    )


def _day_result_model(result) -> schemas.DayResultModel:
    return schemas.DayResultModel(
        scheme=result.scheme.label,
        realized_load_mwh=[float(x) for x in result.realized_load],
        deferral_mwh=[float(x) for x in result.deferral],
        excess_source=list(result.excess_source),
        bau_curtailment_mwh=result.bau_curtailment,
        realized_curtailment_mwh=result.realized_curtailment,
        additional_res_used_mwh=result.additional_res_used,
    )


@app.get("/health", response_model=schemas.HealthResponse)
async def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/fleet/projection", response_model=schemas.FleetProjectionResponse)
async def fleet_projection(
    body: schemas.FleetProjectionRequest,
) -> schemas.FleetProjectionResponse:
    params = _fleet_params(body.config)
    projection = project_fleet(params)
    final = float(projection.ev_counts[-1])
    return schemas.FleetProjectionResponse(
        years=[int(y) for y in projection.years],
        market_shares=[float(s) for s in projection.market_shares],
        ev_counts=[float(c) for c in projection.ev_counts],
        final_ev_count=final,
        daily_energy_mwh=fleet_daily_energy(final, params.km_per_ev_day, params.kwh_per_km),
    )


@app.post("/optimize/shift", response_model=schemas.ShiftResponse)
async def optimize_shift(body: schemas.ShiftRequest) -> schemas.ShiftResponse:
    instance = ShiftInstance(
        excess=np.asarray(body.excess_mwh, dtype=float),
        demand=np.asarray(body.demand_mwh, dtype=float),
        carry_in=body.carry_in_mwh,
        p_max=body.p_max,
    )
    solution = solve_lp(build_shift_lp(instance))
    if solution.status != "optimal":
        raise SolverError(f"shift LP reported {solution.status}")
    plan = extract_plan(solution, instance)
    bau_curtailed = float(np.maximum(instance.excess - instance.demand, 0.0).sum())
    return schemas.ShiftResponse(
        load_mwh=[float(x) for x in plan.load],
        deferral_mwh=[float(x) for x in plan.deferral],
        uptake=[float(x) for x in plan.uptake],
        curtailed_mwh=solution.curtailed_mwh,
        bau_curtailed_mwh=bau_curtailed,
    )


@app.post("/simulate/day", response_model=schemas.DayResultModel)
async def simulate_day(body: schemas.SimulateDayRequest) -> schemas.DayResultModel:
    scheme = _scheme_spec(body.scheme, body.p_max)
    day = _curtailment_day(body.day)
    result = run_day(scheme, day, np.asarray(body.bau_profile_mwh, dtype=float))
    return _day_result_model(result)


@app.post("/simulate/year", response_model=schemas.SimulateYearResponse)
async def simulate_year(body: schemas.SimulateYearRequest) -> schemas.SimulateYearResponse:
    schemes = [_scheme_spec(m, body.p_max) for m in body.schemes]
    days = [_curtailment_day(m) for m in body.days]
    report = run_year(
        days, np.asarray(body.bau_profile_mwh, dtype=float), schemes, parallel=body.parallel
    )
    aggregates = [
        schemas.SchemeAggregateModel(
            kind=agg.scheme.kind,
            step_hours=agg.scheme.step_hours,
            total_additional_res_mwh=agg.total_additional_res_mwh,
            win_fraction=agg.win_fraction,
            worse_than_bau_days=agg.worse_than_bau_days,
        )
        for agg in report.aggregates
    ]
    records = []
    for record in report.days:
        per_scheme = {
            scheme.label: schemas.DaySchemeSummaryModel(
                realized_curtailment_mwh=record.results[j].realized_curtailment,
                additional_res_used_mwh=record.results[j].additional_res_used,
            )
            for j, scheme in enumerate(report.schemes)
        }
        records.append(
            schemas.DayRecordModel(
                day_index=record.day_index,
                bau_curtailment_mwh=record.results[0].bau_curtailment,
                schemes=per_scheme,
            )
        )
    return schemas.SimulateYearResponse(
        curtailment_day_count=report.curtailment_day_count,
        schemes=aggregates,
        days=records,
    )


@app.post("/grid/curtailment-days", response_model=schemas.CurtailmentDaysResponse)
async def curtailment_days(body: schemas.CurtailmentDaysRequest) -> schemas.CurtailmentDaysResponse:
    cap = InstalledCapacity(wind_mw=body.wind_mw, solar_mw=body.solar_mw)
    load = scale_series(np.asarray(body.load_mwh, dtype=float), body.population_growth_factor)
    res = res_output_series(
        np.asarray(body.wind_cf, dtype=float), np.asarray(body.solar_cf, dtype=float), cap
    )
    days = pair_curtailment_days(excess_res_series(res, load))
    models = [
        schemas.DayModel(
            day_index=day.day_index,
            forecast_excess_mwh=[float(x) for x in day.forecast_excess],
            actual_excess_mwh=[float(x) for x in day.actual_excess],
        )
        for day in days
    ]
    return schemas.CurtailmentDaysResponse(
        count=len(models),
        day_indices=[day.day_index for day in days],
        days=models,
    )
