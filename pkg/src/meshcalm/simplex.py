"""Dense simplex solver for nonnegative flow-style linear programs.

Supported form: minimize c.x subject to A_ub x <= b_ub (b_ub >= 0),
A_eq x = 0 and x >= 0. Because the right-hand sides are nonnegative the zero
vector is feasible, so no phase-one search is needed: equality rows start
with artificial basics at level 0 that are pivoted onto structural columns
(or dropped when a row is all zero). Bland's rule keeps the iteration
deterministic and cycle-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, UnboundedProblemError

_TOL = 1e-9
_MAX_ITERATIONS = 100_000


@dataclass(frozen=True)
class LpResult:
    x: np.ndarray
    objective: float
    iterations: int


def solve_min(
    c: np.ndarray,
    a_ub: np.ndarray | None,
    b_ub: np.ndarray | None,
    a_eq: np.ndarray | None,
) -> LpResult:
    c = np.asarray(c, dtype=np.float64)
    n = c.shape[0]
    if a_ub is None:
        a_ub = np.zeros((0, n))
        b_ub = np.zeros(0)
    a_ub = np.asarray(a_ub, dtype=np.float64).reshape(-1, n)
    b_ub = np.asarray(b_ub, dtype=np.float64).reshape(-1)
    if a_eq is None:
        a_eq = np.zeros((0, n))
    a_eq = np.asarray(a_eq, dtype=np.float64).reshape(-1, n)
    if a_ub.shape[0] != b_ub.shape[0]:
        raise InvalidArgumentError("a_ub and b_ub row counts differ")
    if np.any(b_ub < -_TOL):
        raise InvalidArgumentError("b_ub must be nonnegative")
    b_ub = np.maximum(b_ub, 0.0)

    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq
    n_slack = m_ub
    width = n + n_slack

    tableau = np.zeros((m, width))
    tableau[:m_ub, :n] = a_ub
    tableau[m_ub:, :n] = a_eq
    tableau[:m_ub, n : n + n_slack] = np.eye(m_ub)
    rhs = np.concatenate([b_ub, np.zeros(m_eq)])

    # Slack basis for the <= rows; equality rows carry implicit artificials
    # (flagged as -1) that sit at level 0 and must be replaced or dropped.
    basis = list(range(n, n + n_slack)) + [-1] * m_eq

    keep = np.ones(m, dtype=bool)
    for row in range(m_ub, m):
        pivot_col = -1
        for col in range(width):
            if abs(tableau[row, col]) > _TOL:
                pivot_col = col
                break
        if pivot_col < 0:
            keep[row] = False  # redundant all-zero equality row
            continue
        _pivot(tableau, rhs, row, pivot_col)
        basis[row] = pivot_col
    if not keep.all():
        tableau = tableau[keep]
        rhs = rhs[keep]
        basis = [b for b, k in zip(basis, keep) if k]
    m = tableau.shape[0]

    cost = np.zeros(width)
    cost[:n] = c
    reduced = cost.copy()
    for row, b in enumerate(basis):
        if abs(cost[b]) > 0:
            reduced -= cost[b] * tableau[row]

    iterations = 0
    while True:
        entering = -1
        for col in range(width):
            if reduced[col] < -_TOL:
                entering = col
                break
        if entering < 0:
            break
        leaving = -1
        best_ratio = np.inf
        for row in range(m):
            coeff = tableau[row, entering]
            if coeff > _TOL:
                ratio = rhs[row] / coeff
                if ratio < best_ratio - _TOL or (
                    abs(ratio - best_ratio) <= _TOL
                    and (leaving < 0 or basis[row] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = row
        if leaving < 0:
            raise UnboundedProblemError("objective is unbounded below")
        _pivot(tableau, rhs, leaving, entering)
        reduced = reduced - reduced[entering] * tableau[leaving]
        reduced[entering] = 0.0
        basis[leaving] = entering
        iterations += 1
        if iterations > _MAX_ITERATIONS:
            raise RuntimeError("simplex iteration limit exceeded")

    x = np.zeros(width)
    for row, b in enumerate(basis):
        x[b] = max(rhs[row], 0.0)
    solution = x[:n]
    return LpResult(solution, float(c @ solution), iterations)


def _pivot(tableau: np.ndarray, rhs: np.ndarray, row: int, col: int) -> None:
    pivot = tableau[row, col]
    tableau[row] /= pivot
    rhs[row] /= pivot
    for r in range(tableau.shape[0]):
        if r == row:
            continue
        factor = tableau[r, col]
        if factor != 0.0:
            tableau[r] -= factor * tableau[row]
            rhs[r] -= factor * rhs[row]
            if -_TOL < rhs[r] < 0.0:
                rhs[r] = 0.0
