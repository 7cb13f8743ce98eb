import numpy as np
import pytest

from evshift.errors import SolverError
from evshift.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, format_tableau, solve


def test_basic_minimum():
    # min -x0 - 2 x1  s.t.  x0 + x1 <= 4, x1 <= 3
    lp = LinearProgram(c=[-1.0, -2.0], a_ub=[[1, 1], [0, 1]], b_ub=[4, 3])
    res = solve(lp)
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(-7.0)
    assert res.x == pytest.approx([1.0, 3.0])


def test_equality_constraints():
    # min x0 + x1  s.t.  x0 + x1 == 2, x0 - x1 <= 0
    lp = LinearProgram(c=[1.0, 1.0], a_ub=[[1, -1]], b_ub=[0.0], a_eq=[[1, 1]], b_eq=[2.0])
    res = solve(lp)
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(2.0)
    assert res.x.sum() == pytest.approx(2.0)


def test_infeasible():
    # x0 <= -1 with x0 >= 0 has no solution
    lp = LinearProgram(c=[1.0], a_ub=[[1.0]], b_ub=[-1.0])
    assert solve(lp).status == INFEASIBLE


def test_unbounded():
    lp = LinearProgram(c=[-1.0], a_ub=np.zeros((0, 1)), b_ub=[])
    assert solve(lp).status == UNBOUNDED


def test_negative_rhs_feasible():
    # -x0 <= -3 means x0 >= 3; needs a phase-1 artificial
    lp = LinearProgram(c=[1.0], a_ub=[[-1.0]], b_ub=[-3.0])
    res = solve(lp)
    assert res.status == OPTIMAL
    assert res.x[0] == pytest.approx(3.0)


def test_degenerate_does_not_cycle():
    # Classic degeneracy: redundant constraints through the optimum.
    lp = LinearProgram(
        c=[-1.0, -1.0],
        a_ub=[[1, 0], [1, 0], [0, 1], [1, 1]],
        b_ub=[1, 1, 1, 2],
    )
    res = solve(lp)
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(-2.0)


def test_deterministic_vertex():
    lp = LinearProgram(c=[0.0, 0.0], a_ub=[[1, 1]], b_ub=[1.0])
    a = solve(lp)
    b = solve(lp)
    assert np.array_equal(a.x, b.x)
    assert a.iterations == b.iterations


def test_pivot_budget_exhaustion_raises():
    lp = LinearProgram(c=[-1.0, -2.0], a_ub=[[1, 1], [0, 1]], b_ub=[4, 3])
    with pytest.raises(SolverError):
        solve(lp, max_pivots=0)


def test_names_length_checked():
    with pytest.raises(ValueError):
        LinearProgram(c=[1.0, 2.0], a_ub=[[1, 1]], b_ub=[1.0], names=("only_one",))


def test_format_tableau_mentions_names():
    lp = LinearProgram(c=[1.0, 2.0], a_ub=[[1, 1]], b_ub=[1.0], names=("s0", "u0"))
    text = format_tableau(lp)
    assert "s0" in text and "u0" in text
