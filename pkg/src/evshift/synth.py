"""Synthetic one-year dataset generator.

Stands in for historical grid data: an hourly load curve with seasonal and
diurnal structure, wind capacity factors from a slow autoregressive process
with spring-night emphasis, and solar capacity factors from seasonal
clear-sky bells dimmed by autocorrelated cloud cover. Magnitudes are
calibrated so that, at the default installed capacities, roughly a third of
days show at least one hour of excess renewables (the golden manifest
records the exact count per seed).

Generation is deterministic per seed. `synth_dataset` writes the full
dataset (CSVs, configs, run config) plus a manifest with the curtailment-day
count and the first curtailment day of each month; the manifest is computed
from the files as written, so a later simulation of the same directory sees
exactly the manifest's days.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dataio, sim
from .errors import DataError
from .grid import DAYS_PER_YEAR, HOURS_PER_DAY, HOURS_PER_YEAR, InstalledCapacity

DEFAULT_SEED = 42

MONTH_LENGTHS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
MONTH_STARTS = tuple(int(x) for x in np.cumsum((0,) + MONTH_LENGTHS[:-1]))

# Relative load by hour of day (mean ~1), evening peak around hour 16-18.
DIURNAL_LOAD = np.array(
    [0.86, 0.83, 0.81, 0.80, 0.80, 0.82, 0.87, 0.93, 0.98, 1.01, 1.04, 1.07,
     1.10, 1.13, 1.16, 1.18, 1.19, 1.18, 1.15, 1.10, 1.04, 0.98, 0.93, 0.89]
)

DATASET_FILES = {
    "fleet_config": "fleet_config.json",
    "load_csv": "load.csv",
    "capacity_factors_csv": "capacity_factors.csv",
    "hourly_distribution_csv": "hourly_distribution.csv",
    "scenario_config": "scenario_config.json",
    "manifest_json": "manifest.json",
}
RUN_CONFIG_NAME = "run_config.json"
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class SynthParams:
    """Generator settings; defaults give the bundled 2035-style scenario."""

    wind_mw: float = 72000.0
    solar_mw: float = 20000.0
    population_growth_factor: float = 1.13
    base_load_mw: float = 52000.0

    def __post_init__(self):
        if self.wind_mw < 0 or self.solar_mw < 0:
            raise DataError("installed capacities must be non-negative")
        if self.base_load_mw < 0:
            raise DataError("base_load_mw must be non-negative")
        if self.population_growth_factor < 0:
            raise DataError("population_growth_factor must be non-negative")


def _ar1(rng: np.random.Generator, n: int, phi: float) -> np.ndarray:
    """Unit-variance stationary AR(1) series."""
    sigma = math.sqrt(1.0 - phi * phi)
    eps = rng.standard_normal(n)
    x = np.empty(n)
    x[0] = eps[0]
    for t in range(1, n):
        x[t] = phi * x[t - 1] + sigma * eps[t]
    return x


def generate_weather(seed: int, params: SynthParams):
    """Hourly (load_mwh, wind_cf, solar_cf) arrays for one year."""
    rng = np.random.default_rng(seed)
    hours = np.arange(HOURS_PER_YEAR)
    day = hours // HOURS_PER_DAY
    hod = hours % HOURS_PER_DAY

    # Load: summer cooling bump, winter heating shoulders, mild spring/fall.
    seasonal = (
        0.90
        + 0.28 * np.exp(-(((day - 205) / 40.0) ** 2))
        + 0.12 * np.exp(-(((day - 15) / 25.0) ** 2))
        + 0.12 * np.exp(-(((day - 350) / 25.0) ** 2))
    )
    load_noise = 1.0 + 0.025 * _ar1(rng, HOURS_PER_YEAR, 0.9)
    load = params.base_load_mw * seasonal * DIURNAL_LOAD[hod] * np.clip(load_noise, 0.8, 1.2)

    # Wind: slow AR(1) through a logistic squash; windier in spring, at night.
    z = _ar1(rng, HOURS_PER_YEAR, 0.97)
    season_w = 0.60 * np.cos(2 * np.pi * (day - 80) / DAYS_PER_YEAR)
    diur_w = 0.55 * np.cos(2 * np.pi * (hod - 2) / HOURS_PER_DAY)
    logit = 0.8 * z + season_w + diur_w - 0.45
    wind_cf = np.clip(0.03 + 0.90 / (1.0 + np.exp(-logit)), 0.0, 0.98)

    # Solar: clear-sky bell (seasonal width and height) times cloud cover.
    halfwidth = 5.9 + 1.2 * np.cos(2 * np.pi * (day - 172) / DAYS_PER_YEAR)
    phase = (hod - 12.5) / halfwidth
    clear = np.where(np.abs(phase) < 1.0, np.cos(0.5 * np.pi * phase), 0.0) ** 1.3
    amp = 0.72 + 0.08 * np.cos(2 * np.pi * (day - 172) / DAYS_PER_YEAR)
    cloud = np.clip(0.75 + 0.33 * np.tanh(0.9 * _ar1(rng, HOURS_PER_YEAR, 0.93)), 0.05, 1.0)
    solar_cf = np.clip(amp * clear * cloud, 0.0, 1.0)

    return load, wind_cf, solar_cf


def _sample_days(day_indices) -> list[int]:
    """First curtailment day of each month that has one."""
    chosen = []
    selected = np.asarray(sorted(day_indices))
    for m, start in enumerate(MONTH_STARTS):
        end = start + MONTH_LENGTHS[m]
        in_month = selected[(selected >= start) & (selected < end)]
        if in_month.size:
            chosen.append(int(in_month[0]))
    return chosen


def synth_dataset(out_dir, seed: int = DEFAULT_SEED, params: SynthParams | None = None) -> dict:
    """Write a full dataset into out_dir and return its manifest."""
    params = params or SynthParams()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    load, wind_cf, solar_cf = generate_weather(seed, params)
    dataio.write_load_csv(out / DATASET_FILES["load_csv"], load)
    dataio.write_capacity_factors_csv(
        out / DATASET_FILES["capacity_factors_csv"], wind_cf, solar_cf
    )

    # Fleet config and charging distribution ship with the package; the
    # dataset carries copies so a directory is self-contained.
    fleet_params = dataio.read_fleet_config(dataio.bundled_path("fleet_config.json"))
    distribution = dataio.read_hourly_distribution_csv(
        dataio.bundled_path("hourly_distribution.csv")
    )
    dataio.write_fleet_config(out / DATASET_FILES["fleet_config"], fleet_params)
    dataio.write_hourly_distribution_csv(
        out / DATASET_FILES["hourly_distribution_csv"], distribution
    )

    cap = InstalledCapacity(wind_mw=params.wind_mw, solar_mw=params.solar_mw)
    dataio.write_scenario_config(
        out / DATASET_FILES["scenario_config"], cap, params.population_growth_factor
    )

    run_config = {
        "fleet_config": DATASET_FILES["fleet_config"],
        "load_csv": DATASET_FILES["load_csv"],
        "capacity_factors_csv": DATASET_FILES["capacity_factors_csv"],
        "hourly_distribution_csv": DATASET_FILES["hourly_distribution_csv"],
        "scenario_config": DATASET_FILES["scenario_config"],
        "manifest_json": MANIFEST_NAME,
        "schemes": [
            {"kind": "open_loop", "step_hours": None},
            {"kind": "mpc", "step_hours": 6},
            {"kind": "mpc", "step_hours": 3},
        ],
        "p_max": 0.5,
        "seed": seed,
    }
    dataio.write_json(out / RUN_CONFIG_NAME, run_config)

    # Re-read what was written (6-decimal CSVs) so the manifest describes the
    # files exactly as a later simulation will see them.
    scenario = sim.build_scenario(
        fleet_params=dataio.read_fleet_config(out / DATASET_FILES["fleet_config"]),
        load_series=dataio.read_load_csv(out / DATASET_FILES["load_csv"]),
        wind_cf=dataio.read_capacity_factors_csv(out / DATASET_FILES["capacity_factors_csv"])[0],
        solar_cf=dataio.read_capacity_factors_csv(out / DATASET_FILES["capacity_factors_csv"])[1],
        cap=cap,
        population_growth_factor=params.population_growth_factor,
    )
    day_indices = [d.day_index for d in scenario.days]
    manifest = {
        "seed": seed,
        "params": {
            "wind_mw": params.wind_mw,
            "solar_mw": params.solar_mw,
            "population_growth_factor": params.population_growth_factor,
            "base_load_mw": params.base_load_mw,
        },
        "curtailment_day_count": len(day_indices),
        "day_indices": day_indices,
        "sample_day_indices": _sample_days(day_indices),
    }
    dataio.write_json(out / MANIFEST_NAME, manifest)
    return manifest
