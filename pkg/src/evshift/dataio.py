"""File ingestion and serialization.

All CSVs are comma-separated with a header row, `.` decimals, no thousands
separators, and numbers written with 6 decimal places. Readers are strict:
headers must match exactly, hour columns must run 0..N-1 in order, and any
malformed cell raises DataError rather than being coerced. JSON output is
sorted-key with two-space indent so identical content is identical bytes.
"""

from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .fleet import FleetParams
from .grid import HOURS_PER_DAY, HOURS_PER_YEAR, InstalledCapacity

FLEET_CONFIG_KEYS = frozenset(
    {
        "start_year",
        "end_year",
        "initial_ev_count",
        "ldv_total_by_year",
        "market_share_points",
        "lifetime_r",
        "km_per_ev_day",
        "kwh_per_km",
    }
)
SCENARIO_CONFIG_KEYS = frozenset({"wind_mw", "solar_mw", "population_growth_factor"})


def bundled_path(name: str) -> Path:
    """Path to a data file shipped inside the package."""
    path = resources.files("evshift").joinpath("data", name)
    with resources.as_file(path) as concrete:
        return Path(concrete)


def _read_rows(path, expected_header: list[str], expected_rows: int) -> list[list[str]]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if header != expected_header:
            raise DataError(
                f"{path}: expected header {','.join(expected_header)!r}, "
                f"got {','.join(header)!r}"
            )
        rows = [row for row in reader if row]
    if len(rows) != expected_rows:
        raise DataError(f"{path}: expected {expected_rows} rows, got {len(rows)}")
    return rows


def _parse_columns(path, rows, n_cols: int) -> np.ndarray:
    out = np.empty((len(rows), n_cols))
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise DataError(f"{path}: row {i + 2} has {len(row)} fields, expected {n_cols}")
        for j, cell in enumerate(row):
            try:
                out[i, j] = float(cell)
            except ValueError:
                raise DataError(f"{path}: non-numeric value {cell!r} at row {i + 2}") from None
    hours = out[:, 0]
    if not np.array_equal(hours, np.arange(len(rows), dtype=float)):
        raise DataError(f"{path}: hour column must run 0..{len(rows) - 1} in order")
    return out


def _write_rows(path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(value: float) -> str:
    return f"{float(value):.6f}"


def read_hourly_distribution_csv(path) -> np.ndarray:
    rows = _read_rows(path, ["hour", "fraction"], HOURS_PER_DAY)
    return _parse_columns(path, rows, 2)[:, 1]


def write_hourly_distribution_csv(path, distribution) -> None:
    dist = np.asarray(distribution, dtype=float).ravel()
    if dist.size != HOURS_PER_DAY:
        raise DataError(f"distribution must have {HOURS_PER_DAY} entries, got {dist.size}")
    _write_rows(path, ["hour", "fraction"], ((h, _fmt(v)) for h, v in enumerate(dist)))


def read_load_csv(path) -> np.ndarray:
    rows = _read_rows(path, ["hour", "load_mwh"], HOURS_PER_YEAR)
    return _parse_columns(path, rows, 2)[:, 1]


def write_load_csv(path, series) -> None:
    arr = np.asarray(series, dtype=float).ravel()
    if arr.size != HOURS_PER_YEAR:
        raise DataError(f"load series must have {HOURS_PER_YEAR} values, got {arr.size}")
    _write_rows(path, ["hour", "load_mwh"], ((h, _fmt(v)) for h, v in enumerate(arr)))


def read_capacity_factors_csv(path) -> tuple[np.ndarray, np.ndarray]:
    rows = _read_rows(path, ["hour", "wind_cf", "solar_cf"], HOURS_PER_YEAR)
    cols = _parse_columns(path, rows, 3)
    return cols[:, 1], cols[:, 2]


def write_capacity_factors_csv(path, wind_cf, solar_cf) -> None:
    wind = np.asarray(wind_cf, dtype=float).ravel()
    solar = np.asarray(solar_cf, dtype=float).ravel()
    if wind.size != HOURS_PER_YEAR or solar.size != HOURS_PER_YEAR:
        raise DataError("capacity-factor series must have 8760 values each")
    _write_rows(
        path,
        ["hour", "wind_cf", "solar_cf"],
        ((h, _fmt(w), _fmt(s)) for h, (w, s) in enumerate(zip(wind, solar))),
    )


def write_curtailment_days_csv(path, days) -> None:
    rows = []
    for day in days:
        for hour in range(HOURS_PER_DAY):
            rows.append(
                (
                    day.day_index,
                    hour,
                    _fmt(day.forecast_excess[hour]),
                    _fmt(day.actual_excess[hour]),
                )
            )
    _write_rows(
        path, ["day_index", "hour", "forecast_excess_mwh", "actual_excess_mwh"], rows
    )


def write_trace_csv(path, realized_load, deferral, excess_source) -> None:
    load = np.asarray(realized_load, dtype=float).ravel()
    defer = np.asarray(deferral, dtype=float).ravel()
    source = tuple(excess_source)
    if load.size != HOURS_PER_DAY or defer.size != HOURS_PER_DAY or len(source) != HOURS_PER_DAY:
        raise DataError("trace columns must cover 24 hours")
    _write_rows(
        path,
        ["hour", "committed_load_mwh", "deferral_mwh", "excess_source"],
        ((h, _fmt(load[h]), _fmt(defer[h]), source[h]) for h in range(HOURS_PER_DAY)),
    )


def write_remaining_excess_csv(path, bau_excess, scheme_excess) -> None:
    bau = np.asarray(bau_excess, dtype=float).ravel()
    sch = np.asarray(scheme_excess, dtype=float).ravel()
    if bau.size != HOURS_PER_DAY or sch.size != HOURS_PER_DAY:
        raise DataError("remaining-excess profiles must cover 24 hours")
    _write_rows(
        path,
        ["hour", "bau_excess_mwh", "scheme_excess_mwh"],
        ((h, _fmt(b), _fmt(s)) for h, (b, s) in enumerate(zip(bau, sch))),
    )


def read_fleet_config(path) -> FleetParams:
    """Parse a fleet config JSON into FleetParams (uniform hourly split;
    attach a measured distribution via dataclasses.replace)."""
    raw = read_json(path)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: fleet config must be a JSON object")
    keys = set(raw)
    if keys != FLEET_CONFIG_KEYS:
        missing = sorted(FLEET_CONFIG_KEYS - keys)
        extra = sorted(keys - FLEET_CONFIG_KEYS)
        parts = []
        if missing:
            parts.append(f"missing keys {missing}")
        if extra:
            parts.append(f"unexpected keys {extra}")
        raise ConfigError(f"{path}: {'; '.join(parts)}")
    try:
        ldv = {int(y): float(c) for y, c in raw["ldv_total_by_year"].items()}
        points = tuple((int(y), float(s)) for y, s in raw["market_share_points"])
        return FleetParams(
            start_year=int(raw["start_year"]),
            end_year=int(raw["end_year"]),
            initial_ev_count=float(raw["initial_ev_count"]),
            ldv_total_by_year=ldv,
            market_share_points=points,
            lifetime_r=int(raw["lifetime_r"]),
            km_per_ev_day=float(raw["km_per_ev_day"]),
            kwh_per_km=float(raw["kwh_per_km"]),
        )
    except (TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(f"{path}: malformed fleet config: {exc}") from exc


def write_fleet_config(path, params: FleetParams) -> None:
    payload = {
        "start_year": params.start_year,
        "end_year": params.end_year,
        "initial_ev_count": params.initial_ev_count,
        "ldv_total_by_year": {str(y): c for y, c in sorted(params.ldv_total_by_year.items())},
        "market_share_points": [[y, s] for y, s in params.market_share_points],
        "lifetime_r": params.lifetime_r,
        "km_per_ev_day": params.km_per_ev_day,
        "kwh_per_km": params.kwh_per_km,
    }
    write_json(path, payload)


def read_scenario_config(path) -> tuple[InstalledCapacity, float]:
    raw = read_json(path)
    if not isinstance(raw, dict) or set(raw) != SCENARIO_CONFIG_KEYS:
        raise ConfigError(
            f"{path}: scenario config must have exactly keys "
            f"{sorted(SCENARIO_CONFIG_KEYS)}"
        )
    try:
        cap = InstalledCapacity(float(raw["wind_mw"]), float(raw["solar_mw"]))
        growth = float(raw["population_growth_factor"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed scenario config: {exc}") from exc
    if growth < 0:
        raise ConfigError(f"{path}: population_growth_factor must be non-negative")
    return cap, growth


def write_scenario_config(path, cap: InstalledCapacity, growth: float) -> None:
    write_json(
        path,
        {"wind_mw": cap.wind_mw, "solar_mw": cap.solar_mw, "population_growth_factor": growth},
    )


def jsonable(obj):
    """Recursively convert numpy scalars/arrays so json.dumps accepts them."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(obj))


def read_json(path):
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc
