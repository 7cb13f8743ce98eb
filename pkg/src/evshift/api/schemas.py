"""Pydantic request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

HOURS = 24


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str


class FleetConfigModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start_year: int
    end_year: int
    initial_ev_count: float
    ldv_total_by_year: dict[int, float]
    market_share_points: list[tuple[int, float]]
    lifetime_r: int
    km_per_ev_day: float
    kwh_per_km: float


class FleetProjectionRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: Optional[FleetConfigModel] = None  # default: bundled config


class FleetProjectionResponse(BaseModel):
    years: list[int]
    market_shares: list[float]
    ev_counts: list[float]
    final_ev_count: float
    daily_energy_mwh: float


class ShiftRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    excess_mwh: list[float] = Field(min_length=1, max_length=HOURS)
    demand_mwh: list[float] = Field(min_length=1, max_length=HOURS)
    p_max: float = 0.5
    carry_in_mwh: float = 0.0


class ShiftResponse(BaseModel):
    load_mwh: list[float]
    deferral_mwh: list[float]
    uptake: list[float]
    curtailed_mwh: float
    bau_curtailed_mwh: float


class DayModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    day_index: int = 0
    forecast_excess_mwh: list[float] = Field(min_length=HOURS, max_length=HOURS)
    actual_excess_mwh: list[float] = Field(min_length=HOURS, max_length=HOURS)


class SchemeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["bau", "open_loop", "mpc"]
    step_hours: Optional[int] = None


class SimulateDayRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    day: DayModel
    bau_profile_mwh: list[float] = Field(min_length=HOURS, max_length=HOURS)
    scheme: SchemeModel
    p_max: float = 0.5


class DayResultModel(BaseModel):
    scheme: str
    realized_load_mwh: list[float]
    deferral_mwh: list[float]
    excess_source: list[str]
    bau_curtailment_mwh: float
    realized_curtailment_mwh: float
    additional_res_used_mwh: float


class SimulateYearRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    days: list[DayModel] = Field(min_length=1)
    bau_profile_mwh: list[float] = Field(min_length=HOURS, max_length=HOURS)
    schemes: list[SchemeModel] = Field(min_length=1)
    p_max: float = 0.5
    parallel: int = Field(default=1, ge=1, le=16)


class SchemeAggregateModel(BaseModel):
    kind: str
    step_hours: Optional[int]
    total_additional_res_mwh: float
    win_fraction: float
    worse_than_bau_days: int


class DaySchemeSummaryModel(BaseModel):
    realized_curtailment_mwh: float
    additional_res_used_mwh: float


class DayRecordModel(BaseModel):
    day_index: int
    bau_curtailment_mwh: float
    schemes: dict[str, DaySchemeSummaryModel]


class SimulateYearResponse(BaseModel):
    curtailment_day_count: int
    schemes: list[SchemeAggregateModel]
    days: list[DayRecordModel]


class CurtailmentDaysRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    load_mwh: list[float]
    wind_cf: list[float]
    solar_cf: list[float]
    wind_mw: float
    solar_mw: float
    population_growth_factor: float = 1.0


class CurtailmentDaysResponse(BaseModel):
    count: int
    day_indices: list[int]
    days: list[DayModel]
