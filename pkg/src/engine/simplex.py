#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import List, Optional, Sequence
from dataclasses import dataclass
from logging import debug
from enum import IntEnum

import numpy as np

"""
    A textbook two-phase simplex on dense tableaus with Bland's pivoting
    rule. The linear programs solved here have a handful of variables (one
    per model parameter plus a margin), so determinism matters more than
    speed.

    Problems are stated as:

        maximize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0
"""

PIVOT_TOLERANCE = 1e-12

FEASIBILITY_TOLERANCE = 1e-9

MAX_PIVOTS = 10000

class LinearProgramStatus(IntEnum):
    optimal = 0
    infeasible = 1
    unbounded = 2

@dataclass
class LinearProgramResult:

    status : LinearProgramStatus
    x : Optional[np.ndarray] = None
    objective : Optional[float] = None
    pivots : int = 0

def _pivot(tableau : np.ndarray, basis : List[int], row : int, column : int):

    tableau[row] /= tableau[row, column]

    for other in range(tableau.shape[0]):
        if other != row and tableau[other, column] != 0:
            tableau[other] -= tableau[other, column] * tableau[row]

    basis[row] = column

def _minimize(tableau : np.ndarray, basis : List[int], cost : np.ndarray, columns : int) -> tuple:

    """
        Run the simplex from a feasible canonical tableau, minimizing
        cost.x over the first `columns` columns. Returns (bounded, pivots).
    """

    for pivots in range(MAX_PIVOTS):

        reduced = cost[:columns] - cost[basis] @ tableau[:, :columns]

        entering = next((column for column in range(columns) if reduced[column] < -PIVOT_TOLERANCE), None)

        if entering is None:
            return True, pivots

        leaving, best_ratio = None, None

        for row in range(tableau.shape[0]):

            if tableau[row, entering] > PIVOT_TOLERANCE:

                ratio = tableau[row, -1] / tableau[row, entering]

                if best_ratio is None or ratio < best_ratio - PIVOT_TOLERANCE or \
                   (abs(ratio - best_ratio) <= PIVOT_TOLERANCE and basis[row] < basis[leaving]):
                    leaving, best_ratio = row, ratio

        if leaving is None:
            return False, pivots

        _pivot(tableau, basis, leaving, entering)

    raise RuntimeError('Simplex did not terminate after %d pivots' % MAX_PIVOTS)

def maximize(c : Sequence[float], A_ub = None, b_ub = None, A_eq = None, b_eq = None) -> LinearProgramResult:

    c = np.asarray(c, dtype = float)
    variables = c.shape[0]

    A_ub = np.zeros((0, variables)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype = float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype = float)
    A_eq = np.zeros((0, variables)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype = float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype = float)

    slacks = A_ub.shape[0]
    rows = slacks + A_eq.shape[0]

    # Columns: original variables, one slack per inequality, one artificial per row, right-hand side
    real_columns = variables + slacks

    tableau = np.zeros((rows, real_columns + rows + 1))

    tableau[:slacks, :variables] = A_ub
    tableau[:slacks, variables:real_columns] = np.eye(slacks)
    tableau[slacks:, :variables] = A_eq
    tableau[:, -1] = np.concatenate([b_ub, b_eq])

    negative = tableau[:, -1] < 0
    tableau[negative] *= -1

    tableau[:, real_columns:real_columns + rows] = np.eye(rows)

    basis = list(range(real_columns, real_columns + rows))

    # Phase one: minimize the sum of artificials

    phase_one_cost = np.concatenate([np.zeros(real_columns), np.ones(rows)])

    _, first_pivots = _minimize(tableau, basis, phase_one_cost, real_columns + rows)

    if tableau[:, -1] @ phase_one_cost[basis] > FEASIBILITY_TOLERANCE:
        return LinearProgramResult(LinearProgramStatus.infeasible, pivots = first_pivots)

    # Drive the remaining artificials out of the basis, dropping redundant rows

    keep = []

    for row in range(rows):

        if basis[row] >= real_columns:

            column = next((column for column in range(real_columns) if abs(tableau[row, column]) > PIVOT_TOLERANCE), None)

            if column is None:
                continue

            _pivot(tableau, basis, row, column)

        keep.append(row)

    tableau = np.hstack([tableau[keep, :real_columns], tableau[keep, -1:]])
    basis = [basis[row] for row in keep]

    # Phase two on the original objective

    phase_two_cost = np.concatenate([-c, np.zeros(slacks)])

    bounded, second_pivots = _minimize(tableau, basis, phase_two_cost, real_columns)

    pivots = first_pivots + second_pivots

    if not bounded:
        return LinearProgramResult(LinearProgramStatus.unbounded, pivots = pivots)

    solution = np.zeros(real_columns)
    solution[basis] = tableau[:, -1]

    debug('Simplex solved %d rows x %d columns in %d pivots' % (rows, real_columns, pivots))

    return LinearProgramResult(LinearProgramStatus.optimal, solution[:variables], float(c @ solution[:variables]), pivots)

"""
    The largest margin t such that t <= row.pi for every row, over beliefs
    pi in the probability simplex, with optional rows that must vanish
    (within a tolerance) at pi. Used for best-response certificates where
    each row holds the utility gaps of one action against another, per
    parameter.
"""

@dataclass
class MarginResult:

    feasible : bool
    margin : float = float('-inf')
    belief : Optional[np.ndarray] = None

def best_margin(rows, eq_rows = None, eq_tolerance : float = 1e-9) -> MarginResult:

    """
        rows has shape (constraints, dimension) and may hold no constraint,
        in which case the margin is the cap.
    """

    rows = np.asarray(rows, dtype = float)

    dimension = rows.shape[1]

    eq_rows = np.zeros((0, dimension)) if eq_rows is None else np.asarray(eq_rows, dtype = float).reshape(-1, dimension)

    # The margin is shifted by a bound on every row so that it is nonnegative, and capped above
    shift = (np.abs(rows).max() if rows.size else 0.0) + 1

    inequalities = [np.concatenate([-row, [1.0]]) for row in rows]
    bounds = [shift] * rows.shape[0]

    for row in eq_rows:
        inequalities += [np.concatenate([row, [0.0]]), np.concatenate([-row, [0.0]])]
        bounds += [eq_tolerance, eq_tolerance]

    inequalities.append(np.concatenate([np.zeros(dimension), [1.0]]))
    bounds.append(2 * shift)

    result = maximize(np.concatenate([np.zeros(dimension), [1.0]]), np.array(inequalities), np.array(bounds),
        np.concatenate([np.ones(dimension), [0.0]])[None, :], np.array([1.0]))

    if result.status != LinearProgramStatus.optimal:
        return MarginResult(False)

    belief = np.clip(result.x[:dimension], 0, None)
    belief /= belief.sum()

    return MarginResult(True, float(result.x[dimension] - shift), belief)
