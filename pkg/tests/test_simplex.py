"""The in-module LP solver, cross-checked against scipy on random instances."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.optimize import linprog

from meshcalm import InvalidArgumentError, UnboundedProblemError
from meshcalm.simplex import solve_min


def test_simple_bound():
    # min -x s.t. x <= 5
    res = solve_min(np.array([-1.0]), np.array([[1.0]]), np.array([5.0]), None)
    assert res.objective == pytest.approx(-5.0)
    assert res.x[0] == pytest.approx(5.0)


def test_two_variables_shared_capacity():
    # max x + y with x + y <= 3, x <= 2
    res = solve_min(
        np.array([-1.0, -1.0]),
        np.array([[1.0, 1.0], [1.0, 0.0]]),
        np.array([3.0, 2.0]),
        None,
    )
    assert res.objective == pytest.approx(-3.0)


def test_equality_conservation_toy():
    # arcs s->m, m->t with caps 4 and 2; conservation at m; max inflow at t
    c = np.array([0.0, -1.0])
    a_ub = np.array([[1.0, 0.0], [0.0, 1.0]])
    b_ub = np.array([4.0, 2.0])
    a_eq = np.array([[1.0, -1.0]])
    res = solve_min(c, a_ub, b_ub, a_eq)
    assert res.objective == pytest.approx(-2.0)
    assert res.x == pytest.approx([2.0, 2.0])


def test_zero_rhs_is_feasible_and_degenerate():
    c = np.array([1.0, 1.0])
    a_ub = np.array([[1.0, 1.0]])
    b_ub = np.array([0.0])
    res = solve_min(c, a_ub, b_ub, None)
    assert res.objective == pytest.approx(0.0)


def test_redundant_equality_rows_are_dropped():
    c = np.array([-1.0])
    a_eq = np.zeros((2, 1))
    res = solve_min(c, np.array([[1.0]]), np.array([7.0]), a_eq)
    assert res.objective == pytest.approx(-7.0)


def test_unbounded_detection():
    with pytest.raises(UnboundedProblemError):
        solve_min(np.array([-1.0]), None, None, None)


def test_rejects_negative_rhs():
    with pytest.raises(InvalidArgumentError):
        solve_min(np.array([1.0]), np.array([[1.0]]), np.array([-1.0]), None)


def test_matches_scipy_on_random_instances():
    rng = np.random.default_rng(67)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        m_ub = int(rng.integers(1, 5))
        m_eq = int(rng.integers(0, 3))
        c = rng.normal(size=n)
        a_ub = rng.normal(size=(m_ub, n))
        b_ub = rng.uniform(0.0, 5.0, size=m_ub)
        a_eq = rng.normal(size=(m_eq, n)) if m_eq else None

        kwargs = dict(
            c=c,
            A_ub=a_ub,
            b_ub=b_ub,
            bounds=[(0, None)] * n,
            method="highs",
        )
        if a_eq is not None:
            kwargs.update(A_eq=a_eq, b_eq=np.zeros(m_eq))
        reference = linprog(**kwargs)

        if reference.status == 3:
            with pytest.raises(UnboundedProblemError):
                solve_min(c, a_ub, b_ub, a_eq)
            continue
        assert reference.status == 0, reference.message
        res = solve_min(c, a_ub, b_ub, a_eq)
        assert res.objective == pytest.approx(reference.fun, abs=1e-7)


def test_solution_is_deterministic():
    rng = np.random.default_rng(71)
    c = rng.normal(size=8)
    a_ub = np.abs(rng.normal(size=(4, 8)))
    b_ub = rng.uniform(1.0, 3.0, size=4)
    first = solve_min(c, a_ub, b_ub, None)
    second = solve_min(c, a_ub, b_ub, None)
    assert np.array_equal(first.x, second.x)
