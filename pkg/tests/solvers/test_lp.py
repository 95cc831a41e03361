import itertools

import numpy as np
import pytest

from solvers.exc import InvalidProblem
from solvers.lp import LpProblem, LpStatus, solve_lp


def vertex_enumeration(c, A, b):
    """Best objective over the basic feasible solutions of A x <= b."""
    best = -np.inf
    for rows in itertools.combinations(range(A.shape[0]), A.shape[1]):
        rows = list(rows)
        if abs(np.linalg.det(A[rows])) < 1e-12:
            continue
        x = np.linalg.solve(A[rows], b[rows])
        if (A @ x <= b + 1e-9).all():
            best = max(best, c @ x)
    return best


def test_single_upper_bound():
    solution = solve_lp(LpProblem([1.0], [[1.0]], [3.0]))

    assert solution.status is LpStatus.OPTIMAL
    assert solution.xstar == pytest.approx([3.0])
    assert solution.objective == pytest.approx(3.0)


def test_degenerate_optimal_face():
    solution = solve_lp(LpProblem([1.0, 1.0], [[1.0, 1.0]], [1.0], lb=0.0))

    assert solution.status is LpStatus.OPTIMAL
    assert solution.objective == pytest.approx(1.0)
    assert (solution.xstar >= -1e-12).all()


def test_bounds_only():
    solution = solve_lp(LpProblem([1.0, -2.0], lb=[0.0, -1.0], ub=[2.0, 4.0]))

    assert solution.xstar == pytest.approx([2.0, -1.0])


def test_infeasible():
    solution = solve_lp(LpProblem([1.0], [[1.0], [-1.0]], [0.0, -1.0]))

    assert solution.status is LpStatus.INFEASIBLE
    assert solution.xstar is None


def test_unbounded():
    solution = solve_lp(LpProblem([1.0], [[-1.0]], [0.0]))

    assert solution.status is LpStatus.UNBOUNDED
    assert solution.objective == np.inf


def test_many_rows_use_the_dual_simplex():
    A = np.vstack([np.eye(2), -np.eye(2)] * 5)
    b = np.ones(20)

    solution = solve_lp(LpProblem([1.0, 1.0], A, b))

    assert solution.objective == pytest.approx(2.0)


def test_random_lps_match_vertex_enumeration(rng):
    for _ in range(20):
        A = rng.standard_normal((7, 2))
        # a bounded polytope around the origin
        A = np.vstack([A, np.eye(2), -np.eye(2)])
        b = rng.uniform(0.5, 2.0, size=A.shape[0])
        c = rng.standard_normal(2)

        solution = solve_lp(LpProblem(c, A, b))

        assert solution.status is LpStatus.OPTIMAL
        assert solution.objective == pytest.approx(vertex_enumeration(c, A, b), abs=1e-8)
        assert (A @ solution.xstar <= b + 1e-8).all()


def test_rows_need_both_sides():
    with pytest.raises(InvalidProblem):
        LpProblem([1.0], [[1.0]], None)


def test_rows_must_match_bounds():
    with pytest.raises(InvalidProblem):
        LpProblem([1.0, 1.0], [[1.0, 0.0]], [1.0, 2.0])
