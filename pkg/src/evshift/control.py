"""Daily control schemes: BAU, open-loop day-ahead, and shrinking-horizon MPC.

Open-loop optimises once against the day-ahead forecast and applies the
resulting plan unchanged. MPC re-optimises every step_hours over the
remaining hours of the day and commits the next step_hours of the plan;
deferral crossing a step boundary is carried into the next optimisation's
first hour. At each update the first UPDATE_WINDOW_HOURS of the remaining
excess vector are replaced with the day's actual values and the rest keeps
the forecast. The window is a fixed 3 hours for every step size, so a
6-hour step commits its second half on forecast data alone; that
information deficit is what lets finer steps outperform coarser ones when
forecasts err. Every scheme is scored after the fact against the day's
actual excess profile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SolverError
from .grid import HOURS_PER_DAY, CurtailmentDay
from .optimizer import ShiftInstance, build_shift_lp, curtailment, extract_plan, solve_lp

KIND_BAU = "bau"
KIND_OPEN_LOOP = "open_loop"
KIND_MPC = "mpc"
SCHEME_KINDS = (KIND_BAU, KIND_OPEN_LOOP, KIND_MPC)
VALID_STEP_HOURS = (1, 2, 3, 4, 6, 8, 12)

# Hours of actual excess revealed per MPC update, independent of step size.
UPDATE_WINDOW_HOURS = 3

CONSERVATION_RTOL = 1e-6


@dataclass(frozen=True)
class SchemeSpec:
    kind: str
    step_hours: int | None = None
    p_max: float = 0.5

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ConfigError(f"unknown scheme kind {self.kind!r}; expected one of {SCHEME_KINDS}")
        if self.kind == KIND_MPC:
            if self.step_hours not in VALID_STEP_HOURS:
                raise ConfigError(
                    f"mpc step_hours must be one of {VALID_STEP_HOURS}, got {self.step_hours}"
                )
        elif self.step_hours is not None:
            raise ConfigError(f"step_hours only applies to mpc, not {self.kind}")
        if not 0.0 <= self.p_max <= 1.0:
            raise ConfigError(f"p_max must lie in [0, 1], got {self.p_max}")

    @property
    def label(self) -> str:
        if self.kind == KIND_MPC:
            return f"mpc-{self.step_hours}"
        return self.kind.replace("_", "-")


@dataclass(frozen=True)
class DayResult:
    scheme: SchemeSpec
    realized_load: np.ndarray
    deferral: np.ndarray
    excess_source: tuple[str, ...]  # per committed hour: none | forecast | actual
    bau_curtailment: float
    realized_curtailment: float
    additional_res_used: float


def _check_conservation(realized: np.ndarray, bau: np.ndarray, context: str) -> None:
    total, expected = float(realized.sum()), float(bau.sum())
    if abs(total - expected) > CONSERVATION_RTOL * max(1.0, expected):
        raise SolverError(
            f"{context}: realized load sums to {total}, BAU demand sums to {expected}"
        )


def _finish(scheme, day, bau, realized, deferral, source) -> DayResult:
    _check_conservation(realized, bau, scheme.label)
    # Round the summary MWh fields to report precision (6 decimals, the CSV
    # convention). additional_res_used is a difference of two float sums and
    # its sign drives the worse-than-BAU count, so days where the scheme
    # absorbs exactly as much as BAU must land on 0.0, not summation noise.
    bau_curt = round(curtailment(day.actual_excess, bau), 6)
    realized_curt = round(curtailment(day.actual_excess, realized), 6)
    return DayResult(
        scheme=scheme,
        realized_load=realized,
        deferral=deferral,
        excess_source=source,
        bau_curtailment=bau_curt,
        realized_curtailment=realized_curt,
        additional_res_used=round(bau_curt - realized_curt, 6) + 0.0,
    )


def _solve(excess, demand, carry_in, p_max, lp_sink=None, label=""):
    inst = ShiftInstance(excess=excess, demand=demand, carry_in=carry_in, p_max=p_max)
    shift_lp = build_shift_lp(inst)
    if lp_sink is not None:
        lp_sink(label, shift_lp)
    sol = solve_lp(shift_lp)
    if sol.status != "optimal":
        raise SolverError(f"{label or 'shift'}: LP reported {sol.status}")
    return extract_plan(sol, inst)


def run_bau(day: CurtailmentDay, bau) -> DayResult:
    bau_profile = np.asarray(bau, dtype=float).ravel()
    scheme = SchemeSpec(kind=KIND_BAU, p_max=0.0)
    return _finish(
        scheme,
        day,
        bau_profile,
        bau_profile.copy(),
        np.zeros(HOURS_PER_DAY),
        ("none",) * HOURS_PER_DAY,
    )


def run_open_loop(day: CurtailmentDay, bau, p_max: float, lp_sink=None) -> DayResult:
    bau_profile = np.asarray(bau, dtype=float).ravel()
    scheme = SchemeSpec(kind=KIND_OPEN_LOOP, p_max=p_max)
    plan = _solve(
        day.forecast_excess, bau_profile, 0.0, p_max, lp_sink, f"{scheme.label}-t00"
    )
    return _finish(
        scheme,
        day,
        bau_profile,
        plan.load,
        plan.deferral,
        ("forecast",) * HOURS_PER_DAY,
    )


def run_mpc(day: CurtailmentDay, bau, p_max: float, step_hours: int, lp_sink=None) -> DayResult:
    bau_profile = np.asarray(bau, dtype=float).ravel()
    scheme = SchemeSpec(kind=KIND_MPC, step_hours=step_hours, p_max=p_max)
    delta = scheme.step_hours
    realized = np.empty(HOURS_PER_DAY)
    deferral = np.empty(HOURS_PER_DAY)
    source: list[str] = []
    carry = 0.0
    truth = min(UPDATE_WINDOW_HOURS, delta)
    for t in range(0, HOURS_PER_DAY, delta):
        # A fixed 3-hour nowcast: actual values for the next window, forecast beyond.
        w = t + UPDATE_WINDOW_HOURS
        excess = np.concatenate([day.actual_excess[t:w], day.forecast_excess[w:]])
        plan = _solve(
            excess, bau_profile[t:], carry, p_max, lp_sink, f"{scheme.label}-t{t:02d}"
        )
        realized[t : t + delta] = plan.load[:delta]
        deferral[t : t + delta] = plan.deferral[:delta]
        source.extend(["actual"] * truth + ["forecast"] * (delta - truth))
        carry = float(plan.deferral[delta - 1])
    return _finish(scheme, day, bau_profile, realized, deferral, tuple(source))


def run_day(scheme: SchemeSpec, day: CurtailmentDay, bau, lp_sink=None) -> DayResult:
    """Dispatch one day under one scheme."""
    if scheme.kind == KIND_BAU:
        return run_bau(day, bau)
    if scheme.kind == KIND_OPEN_LOOP:
        return run_open_loop(day, bau, scheme.p_max, lp_sink)
    return run_mpc(day, bau, scheme.p_max, scheme.step_hours, lp_sink)
