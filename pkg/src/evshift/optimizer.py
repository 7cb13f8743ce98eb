"""Hourly load-shift optimisation over a single horizon.

The decision variables are per-hour deferrals s[k] (MWh pushed from hour k
into hour k+1). Deferred energy joins the next hour's pool and may itself be
deferred again, so the rate constraint cascades:

    s[k] <= p_max * (demand[k] + s[k-1]),     s[-1] = carry_in
    s[H-1] = 0                                (nothing leaves the horizon)

The controlled load is L[k] = demand[k] + s[k-1] - s[k], which telescopes to
sum(L) = sum(demand) + carry_in: conservation is structural, not a
constraint. Unused renewable excess is linearised through epigraph variables
u[k] >= excess[k] - L[k], u >= 0, and the objective minimises total excess
left on the table plus a tiny multiple of total deferral so that among
equal-curtailment optima the solver picks the plan that moves the least
energy (and, in particular, does nothing when shifting cannot help).

`oracle_search` is a deliberately independent check: it simulates the
cascade over a uniform grid of uptake fractions and returns the exact best
curtailment on that grid, sharing no code with the LP path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .errors import DataError, SolverError

MAX_HORIZON = 24
ORACLE_MAX_HORIZON = 8

# Secondary-objective weight: lexicographic tie-break toward least deferral.
SHIFT_TIEBREAK_EPS = 1e-6
# Relative tolerance on sum(load) == sum(demand) + carry_in.
CONSERVATION_RTOL = 1e-6


def _as_profile(values, name: str, length: int | None = None) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if length is not None and arr.size != length:
        raise DataError(f"{name} must have length {length}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class ShiftInstance:
    """One optimisation horizon: excess supply, uncontrolled demand, energy
    carried in from before hour 0, and the uptake cap."""

    excess: np.ndarray
    demand: np.ndarray
    carry_in: float = 0.0
    p_max: float = 0.5

    def __post_init__(self):
        excess = _as_profile(self.excess, "excess")
        demand = _as_profile(self.demand, "demand", length=excess.size)
        if not 1 <= excess.size <= MAX_HORIZON:
            raise DataError(f"horizon must be in 1..{MAX_HORIZON}, got {excess.size}")
        if np.any(excess < 0) or np.any(demand < 0):
            raise DataError("excess and demand must be non-negative")
        if not np.isfinite(self.carry_in) or self.carry_in < 0:
            raise DataError("carry_in must be a non-negative finite value")
        if not 0.0 <= self.p_max <= 1.0:
            raise DataError(f"p_max must lie in [0, 1], got {self.p_max}")
        object.__setattr__(self, "excess", excess)
        object.__setattr__(self, "demand", demand)
        object.__setattr__(self, "carry_in", float(self.carry_in))
        object.__setattr__(self, "p_max", float(self.p_max))

    @property
    def horizon(self) -> int:
        return self.excess.size


@dataclass(frozen=True)
class ShiftLp:
    """The assembled program plus the variable layout needed to read it back:
    columns are [s0 .. s(H-2), u0 .. u(H-1)]; s[H-1] is identically zero and
    carries no column (for H=1 the program is the single variable u0)."""

    program: lp.LinearProgram
    horizon: int


@dataclass(frozen=True)
class LpSolution:
    status: str
    deferral: np.ndarray  # s, length H (trailing entry always 0)
    slack_excess: np.ndarray  # u, length H
    curtailed_mwh: float  # sum(u): unused excess at the optimum
    objective: float  # raw LP objective including the tie-break term
    iterations: int


@dataclass(frozen=True)
class ShiftPlan:
    """Optimal deferrals with the uptake fractions and load they imply."""

    deferral: np.ndarray  # s[k], MWh moved from hour k to k+1
    uptake: np.ndarray  # p[k] = s[k] / (demand[k] + s[k-1])
    load: np.ndarray  # controlled load L[k]


def build_shift_lp(inst: ShiftInstance) -> ShiftLp:
    """Emit the deferral LP for one instance.

    Rows are the uptake caps for hours 0..H-2 followed by the epigraph rows
    for hours 0..H-1; the hour-(H-1) uptake cap is vacuous because s[H-1] is
    eliminated rather than constrained to zero.
    """
    h = inst.horizon
    n_s = h - 1
    n = n_s + h
    e, d, pm = inst.excess, inst.demand, inst.p_max

    c = np.concatenate([np.full(n_s, SHIFT_TIEBREAK_EPS), np.ones(h)])
    names = tuple(f"s{k}" for k in range(n_s)) + tuple(f"u{k}" for k in range(h))

    a_ub = np.zeros((n_s + h, n))
    b_ub = np.zeros(n_s + h)

    # s[k] - p_max * s[k-1] <= p_max * (demand[k] + carry at k=0)
    for k in range(n_s):
        a_ub[k, k] = 1.0
        rhs = pm * d[k]
        if k == 0:
            rhs += pm * inst.carry_in
        else:
            a_ub[k, k - 1] = -pm
        b_ub[k] = rhs

    # s[k] - s[k-1] - u[k] <= demand[k] - excess[k] (+ carry at k=0)
    for k in range(h):
        row = n_s + k
        if k < n_s:
            a_ub[row, k] = 1.0
        if k > 0:
            a_ub[row, k - 1] = -1.0
        a_ub[row, n_s + k] = -1.0
        rhs = d[k] - e[k]
        if k == 0:
            rhs += inst.carry_in
        b_ub[row] = rhs

    return ShiftLp(lp.LinearProgram(c=c, a_ub=a_ub, b_ub=b_ub, names=names), h)


def solve_lp(shift_lp: ShiftLp) -> LpSolution:
    """Solve to a vertex optimum; identical instances yield identical pivots
    and therefore bit-identical solutions."""
    result = lp.solve(shift_lp.program)
    h = shift_lp.horizon
    if result.status != lp.OPTIMAL:
        return LpSolution(result.status, np.zeros(h), np.zeros(h), np.nan, np.nan, result.iterations)
    s = np.zeros(h)
    s[: h - 1] = result.x[: h - 1]
    u = result.x[h - 1 :].copy()
    return LpSolution(lp.OPTIMAL, s, u, float(u.sum()), result.objective, result.iterations)


def extract_plan(sol: LpSolution, inst: ShiftInstance) -> ShiftPlan:
    """Recover uptake fractions and controlled load from a solved instance."""
    if sol.status != lp.OPTIMAL:
        raise SolverError(f"cannot extract a plan from a {sol.status} solution")
    s = np.maximum(sol.deferral, 0.0)
    prev = np.concatenate([[inst.carry_in], s[:-1]])
    available = inst.demand + prev
    uptake = np.where(available > 1e-9, s / np.where(available > 1e-9, available, 1.0), 0.0)
    load = available - s

    if np.any(uptake > inst.p_max + 1e-9):
        raise SolverError("solution violates the uptake bound")
    total = float(load.sum())
    expected = float(inst.demand.sum() + inst.carry_in)
    if abs(total - expected) > CONSERVATION_RTOL * max(1.0, expected):
        raise SolverError(
            f"energy conservation violated: load sums to {total}, expected {expected}"
        )
    return ShiftPlan(deferral=s, uptake=uptake, load=load)


def solve_shift(inst: ShiftInstance) -> tuple[ShiftPlan, LpSolution]:
    """Build, solve and extract in one call."""
    sol = solve_lp(build_shift_lp(inst))
    if sol.status != lp.OPTIMAL:
        raise SolverError(f"shift LP reported {sol.status}")
    return extract_plan(sol, inst), sol


def curtailment(excess, load) -> float:
    """Unused excess: sum over hours of max(excess - load, 0)."""
    e = _as_profile(excess, "excess")
    ld = _as_profile(load, "load")
    if e.size != ld.size:
        raise DataError(f"profile lengths differ: {e.size} vs {ld.size}")
    return float(np.maximum(e - ld, 0.0).sum())


# State-frontier cap for oracle_search. Past the cap, states are merged by
# nearby carry; see the docstring for why this cannot undershoot the optimum.
ORACLE_STATE_CAP = 60_000


def oracle_search(inst: ShiftInstance, grid_steps: int) -> float:
    """Minimum curtailment over the uptake grid {0, pm/g, ..., pm}^(H-1).

    Independent of the LP path: simulates the deferral cascade directly,
    expanding states of (accumulated cost, carried deferral) hour by hour.
    A state is dropped when another state carries at least as much at no
    greater cost (more carry never hurts the remaining hours), or when an
    optimistic completion bound cannot beat a full plan already in hand.
    Both prunes preserve the exact grid optimum.

    If the surviving frontier still exceeds a cap, states with nearly equal
    carry are merged, cheapest kept. Every kept state is a real grid plan
    prefix, so the returned value is always the curtailment of an actual
    grid plan (never below the true grid minimum); the merge resolution
    keeps it within a vanishing margin above it. The blow-up only occurs
    when excess dwarfs load in every hour, where all plans cost the same
    and the merge loses nothing.
    """
    h = inst.horizon
    if h > ORACLE_MAX_HORIZON:
        raise DataError(
            f"oracle_search is exhaustive and limited to horizons <= {ORACLE_MAX_HORIZON}"
        )
    if grid_steps < 1:
        raise DataError("grid_steps must be at least 1")
    e, d, pm = inst.excess, inst.demand, inst.p_max
    p_grid = np.unique(pm * np.arange(grid_steps + 1) / grid_steps)

    # Cost of finishing BAU-style from hour k with nothing carried.
    tail_bau = np.zeros(h + 2)
    gaps = np.maximum(e - d, 0.0)
    tail_bau[:h] = gaps[::-1].cumsum()[::-1]

    carry = np.array([inst.carry_in])
    cost = np.array([0.0])
    # Releasing everything immediately is always on the grid (p = 0).
    best = cost[0] + max(e[0] - d[0] - carry[0], 0.0) + tail_bau[1]

    for k in range(h - 1):
        pool = d[k] + carry  # energy available in hour k per state
        s_next = pool[:, None] * p_grid[None, :]
        load = pool[:, None] - s_next
        new_cost = (cost[:, None] + np.maximum(e[k] - load, 0.0)).ravel()
        new_carry = s_next.ravel()
        del s_next, load

        # Incumbent refresh: complete each state with p = 0 from hour k+1.
        first_gap = np.maximum(e[k + 1] - d[k + 1] - new_carry, 0.0)
        best = min(best, float((new_cost + first_gap).min()) + tail_bau[k + 2])

        # Optimistic bound: every remaining hour independently enjoys the
        # largest carry an all-p_max cascade from this state could deliver
        # (that carry is affine in the state's own carry).
        bound = first_gap
        a, b = 0.0, 1.0
        for j in range(k + 2, h):
            a, b = pm * (d[j - 1] + a), pm * b
            bound = bound + np.maximum(e[j] - d[j] - a - b * new_carry, 0.0)
        keep = new_cost + bound <= best + 1e-9
        new_cost, new_carry = new_cost[keep], new_carry[keep]
        if new_cost.size == 0:
            return float(best)

        # Pareto prune: sort by carry descending, keep strict cost improvements.
        order = np.lexsort((new_cost, -new_carry))
        sorted_cost = new_cost[order]
        running = np.minimum.accumulate(sorted_cost)
        keep_sorted = np.ones(sorted_cost.size, dtype=bool)
        keep_sorted[1:] = sorted_cost[1:] < running[:-1]
        chosen = order[keep_sorted]
        cost, carry = new_cost[chosen], new_carry[chosen]

        if cost.size > ORACLE_STATE_CAP:
            lo = carry.min()
            width = max((carry.max() - lo) / ORACLE_STATE_CAP, 1e-12)
            bucket = np.floor((carry - lo) / width).astype(np.int64)
            order = np.lexsort((-carry, cost, bucket))
            b_sorted = bucket[order]
            first = np.ones(order.size, dtype=bool)
            first[1:] = b_sorted[1:] != b_sorted[:-1]
            chosen = order[first]
            cost, carry = cost[chosen], carry[chosen]

    final = cost + np.maximum(e[h - 1] - (d[h - 1] + carry), 0.0)
    return float(min(best, float(final.min())))
