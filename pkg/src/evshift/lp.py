"""Dense two-phase simplex for small linear programs.

Solves  min c.x  subject to  A_ub.x <= b_ub,  A_eq.x == b_eq,  x >= 0.

Everything lives in a single dense numpy tableau, which is the right trade
for the problem sizes here (a few dozen variables and rows). Pivoting uses
Bland's rule throughout -- lowest-index entering column, lowest-index basic
variable on ratio ties -- so the solver cannot cycle and the returned vertex
is a deterministic function of the input. Rows whose slack cannot seed the
basis get an artificial variable and a phase-1 feasibility solve; unit
columns already present in the constraint matrix are crashed into the
initial basis so the common case (all rows coverable) skips phase 1
entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# Entries smaller than this never serve as pivots; reduced costs closer to
# zero than this count as optimal.
PIVOT_TOL = 1e-9
# Residual phase-1 objective above this means no feasible point exists.
FEASIBILITY_TOL = 1e-7

DEFAULT_MAX_PIVOTS = 20_000


@dataclass(frozen=True)
class LinearProgram:
    """Standard-form program: min c.x, A_ub.x <= b_ub, A_eq.x == b_eq, x >= 0."""

    c: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    names: tuple[str, ...] = ()

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        a_ub = np.asarray(self.a_ub, dtype=float).reshape(-1, c.size)
        b_ub = np.asarray(self.b_ub, dtype=float).ravel()
        if a_ub.shape[0] != b_ub.size:
            raise ValueError("a_ub and b_ub row counts differ")
        if self.a_eq is None:
            a_eq = np.zeros((0, c.size))
            b_eq = np.zeros(0)
        else:
            a_eq = np.asarray(self.a_eq, dtype=float).reshape(-1, c.size)
            b_eq = np.asarray(self.b_eq, dtype=float).ravel()
            if a_eq.shape[0] != b_eq.size:
                raise ValueError("a_eq and b_eq row counts differ")
        names = tuple(self.names) or tuple(f"x{j}" for j in range(c.size))
        if len(names) != c.size:
            raise ValueError("variable name count does not match c")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "a_ub", a_ub)
        object.__setattr__(self, "b_ub", b_ub)
        object.__setattr__(self, "a_eq", a_eq)
        object.__setattr__(self, "b_eq", b_eq)
        object.__setattr__(self, "names", names)

    @property
    def num_vars(self) -> int:
        return self.c.size


@dataclass(frozen=True)
class SimplexResult:
    status: str  # optimal | infeasible | unbounded
    x: np.ndarray
    objective: float
    iterations: int


def solve(lp: LinearProgram, max_pivots: int = DEFAULT_MAX_PIVOTS) -> SimplexResult:
    """Solve the program; never raises for infeasible/unbounded, only for
    numerical breakdown (pivot budget exhausted)."""
    n = lp.num_vars
    m_ub = lp.b_ub.size
    m = m_ub + lp.b_eq.size

    # Rows: inequalities first (gaining a slack each), then equalities.
    body = np.vstack([lp.a_ub, lp.a_eq]) if m else np.zeros((0, n))
    rhs = np.concatenate([lp.b_ub, lp.b_eq])
    slack = np.zeros((m, m_ub))
    slack[:m_ub, :] = np.eye(m_ub)

    # Normalise to rhs >= 0 (flips slack signs on the affected rows).
    neg = rhs < 0
    body[neg] *= -1.0
    rhs[neg] *= -1.0
    slack[neg] *= -1.0

    cols = np.hstack([body, slack])
    n_cols = n + m_ub

    # Crash basis: a slack with +1 sign covers its row; otherwise reuse any
    # exact unit column from the model (cost is priced out later); otherwise
    # fall back to an artificial variable.
    basis = np.full(m, -1, dtype=int)
    used = set()
    for i in range(m):
        if i < m_ub and slack[i, i] > 0:
            basis[i] = n + i
            used.add(n + i)
            continue
        for j in range(n):
            if j in used or cols[i, j] != 1.0:
                continue
            if np.count_nonzero(cols[:, j]) == 1:
                basis[i] = j
                used.add(j)
                break

    need_artificial = np.flatnonzero(basis < 0)
    n_art = need_artificial.size
    if n_art:
        art = np.zeros((m, n_art))
        for k, i in enumerate(need_artificial):
            art[i, k] = 1.0
            basis[i] = n_cols + k
        cols = np.hstack([cols, art])

    tableau = np.hstack([cols, rhs[:, None]])
    total_cols = cols.shape[1]
    allowed = np.ones(total_cols, dtype=bool)
    iterations = 0

    def run_phase(costs: np.ndarray, phase: int) -> str:
        nonlocal iterations
        # Reduced-cost row: c_j - c_B . B^-1 A_j; basis columns price to zero.
        z = costs.copy()
        obj = 0.0
        for i in range(m):
            cb = costs[basis[i]]
            if cb != 0.0:
                z -= cb * tableau[i, :-1]
                obj -= cb * tableau[i, -1]
        z_row = np.concatenate([z, [obj]])

        while True:
            candidates = np.flatnonzero(allowed & (z_row[:-1] < -PIVOT_TOL))
            if candidates.size == 0:
                return OPTIMAL
            enter = int(candidates[0])  # Bland: lowest index
            col = tableau[:, enter]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return UNBOUNDED
            ratios = tableau[rows, -1] / col[rows]
            tied = rows[ratios == ratios.min()]
            leave = int(tied[np.argmin(basis[tied])])  # Bland: lowest basic index

            iterations += 1
            if iterations > max_pivots:
                raise SolverError(
                    f"simplex exceeded {max_pivots} pivots "
                    f"(phase {phase}, objective {z_row[-1]:.6g})"
                )
            pivot = tableau[leave, enter]
            tableau[leave] /= pivot
            factors = tableau[:, enter].copy()
            factors[leave] = 0.0
            tableau[:] -= np.outer(factors, tableau[leave])
            z_row -= z_row[enter] * tableau[leave]
            basis[leave] = enter

    if n_art:
        phase1_costs = np.zeros(total_cols)
        phase1_costs[n_cols:] = 1.0
        status = run_phase(phase1_costs, phase=1)
        if status == UNBOUNDED:
            raise SolverError("phase-1 problem reported unbounded")
        infeas = sum(tableau[i, -1] for i in range(m) if basis[i] >= n_cols)
        if infeas > FEASIBILITY_TOL:
            return SimplexResult(INFEASIBLE, np.full(n, np.nan), np.nan, iterations)
        # Drive surviving zero-valued artificials out of the basis, dropping
        # redundant rows where no legal pivot exists.
        for i in range(m):
            if basis[i] < n_cols:
                continue
            row = tableau[i, :n_cols]
            pivots = np.flatnonzero(np.abs(row) > PIVOT_TOL)
            if pivots.size:
                enter = int(pivots[0])
                pivot = tableau[i, enter]
                tableau[i] /= pivot
                factors = tableau[:, enter].copy()
                factors[i] = 0.0
                tableau[:] -= np.outer(factors, tableau[i])
                basis[i] = enter
            else:
                tableau[i] = 0.0  # redundant constraint
        allowed[n_cols:] = False

    phase2_costs = np.zeros(total_cols)
    phase2_costs[:n] = lp.c
    status = run_phase(phase2_costs, phase=2)
    if status == UNBOUNDED:
        return SimplexResult(UNBOUNDED, np.full(n, np.nan), np.nan, iterations)

    x = np.zeros(total_cols)
    x[basis] = tableau[:, -1]
    solution = x[:n]
    return SimplexResult(OPTIMAL, solution, float(lp.c @ solution), iterations)


def format_tableau(lp: LinearProgram) -> str:
    """Plain-text dump of the program: one aligned column per variable, the
    objective row first, then each constraint with its relation and RHS."""
    width = max(12, max(len(s) for s in lp.names) + 2)
    lines = []
    header = "".join(name.rjust(width) for name in lp.names)
    lines.append(" " * 10 + header + "        rel          rhs")
    lines.append(
        "min       " + "".join(f"{v:{width}.6g}" for v in lp.c)
    )
    for label, a, rel, b in (("ub", lp.a_ub, "<=", lp.b_ub), ("eq", lp.a_eq, "==", lp.b_eq)):
        for i in range(b.size):
            row = "".join(f"{v:{width}.6g}" for v in a[i])
            lines.append(f"{label}[{i:>3}]   " + row + f"   {rel} {b[i]:12.6g}")
    return "\n".join(lines) + "\n"
