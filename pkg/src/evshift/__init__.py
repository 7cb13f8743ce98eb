"""Shift aggregated EV charging into hours of excess renewable generation.

The package projects an EV fleet into a target year, derives its
business-as-usual charging profile, builds an hourly excess-renewables
series for a grid scenario, and simulates three control schemes (BAU,
open-loop day-ahead, shrinking-horizon MPC) over every curtailment day of
the year, reporting how much otherwise-curtailed energy each scheme
absorbs.
"""

__version__ = "0.1.0"

from .control import DayResult, SchemeSpec, run_bau, run_day, run_mpc, run_open_loop
from .errors import ConfigError, DataError, EvShiftError, SolverError, UsageError
from .fleet import FleetParams, FleetProjection, project_fleet
from .grid import CurtailmentDay, InstalledCapacity, pair_curtailment_days
from .optimizer import ShiftInstance, ShiftPlan, curtailment, oracle_search, solve_shift
from .sim import AnnualReport, Scenario, build_scenario, run_year

__all__ = [
    "AnnualReport",
    "ConfigError",
    "CurtailmentDay",
    "DataError",
    "DayResult",
    "EvShiftError",
    "FleetParams",
    "FleetProjection",
    "InstalledCapacity",
    "Scenario",
    "SchemeSpec",
    "ShiftInstance",
    "ShiftPlan",
    "SolverError",
    "UsageError",
    "build_scenario",
    "curtailment",
    "oracle_search",
    "pair_curtailment_days",
    "project_fleet",
    "run_bau",
    "run_day",
    "run_mpc",
    "run_open_loop",
    "run_year",
    "solve_shift",
    "__version__",
]
