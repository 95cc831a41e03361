"""Linear programs, maximization form.

Backed by the HiGHS simplex codes shipped with scipy: the dual simplex is
picked when the constraint rows outnumber the variables.
"""
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import linprog

from common.loggers import logger
from settings.solvers import DUAL_SIMPLEX_RATIO, LP_FEASIBILITY_TOL

from .exc import InvalidProblem, NumericalFailure
from .linalg import as_matrix, as_vector


class LpStatus(str, Enum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    UNBOUNDED = 'unbounded'
    MAX_ITER = 'max_iter'


_HIGHS_STATUS = {
    0: LpStatus.OPTIMAL,
    1: LpStatus.MAX_ITER,
    2: LpStatus.INFEASIBLE,
    3: LpStatus.UNBOUNDED,
}


@dataclass(frozen=True, eq=False)
class LpProblem:
    """maximize c @ x  s.t.  Aineq @ x <= bineq,  lb <= x <= ub.

    Missing bounds mean the variable is free.
    """

    c: np.ndarray
    Aineq: Optional[np.ndarray] = None
    bineq: Optional[np.ndarray] = None
    lb: Optional[np.ndarray] = None
    ub: Optional[np.ndarray] = None

    def __post_init__(self):
        c = as_vector(self.c, 'c')
        object.__setattr__(self, 'c', c)

        if (self.Aineq is None) != (self.bineq is None):
            raise InvalidProblem('Aineq and bineq must be given together')

        if self.Aineq is not None:
            Aineq = np.asarray(self.Aineq, dtype=float).reshape(-1, c.size)
            bineq = as_vector(self.bineq, 'bineq')
            if Aineq.shape[0] != bineq.size:
                raise InvalidProblem(f'Aineq has {Aineq.shape[0]} rows but bineq has {bineq.size}')
            object.__setattr__(self, 'Aineq', as_matrix(Aineq, 'Aineq') if Aineq.size else Aineq)
            object.__setattr__(self, 'bineq', bineq)

        for name in ('lb', 'ub'):
            bound = getattr(self, name)
            if bound is None:
                continue
            bound = np.broadcast_to(as_vector(bound, name), c.shape).astype(float)
            object.__setattr__(self, name, bound)

    @property
    def dimension(self) -> int:
        return self.c.size

    @property
    def rows(self) -> int:
        return 0 if self.Aineq is None else self.Aineq.shape[0]

    def bounds(self):
        lb = self.lb if self.lb is not None else np.full(self.dimension, -np.inf)
        ub = self.ub if self.ub is not None else np.full(self.dimension, np.inf)
        return [(None if np.isinf(lo) else lo, None if np.isinf(up) else up)
                for lo, up in zip(lb, ub)]


class LpSolution(NamedTuple):
    xstar: Optional[np.ndarray]
    status: LpStatus
    objective: float


def solve_lp(problem: LpProblem) -> LpSolution:
    """Maximize the problem's objective."""
    method = 'highs-ds' if problem.rows > DUAL_SIMPLEX_RATIO * problem.dimension else 'highs'

    result = linprog(
        -problem.c,
        A_ub=problem.Aineq if problem.rows else None,
        b_ub=problem.bineq if problem.rows else None,
        bounds=problem.bounds(),
        method=method,
        options={
            'primal_feasibility_tolerance': LP_FEASIBILITY_TOL,
            'dual_feasibility_tolerance': LP_FEASIBILITY_TOL,
        },
    )

    status = _HIGHS_STATUS.get(result.status)
    if status is None:
        raise NumericalFailure(f'LP solver failed: {result.message}')

    if status is not LpStatus.OPTIMAL:
        logger.debug(f'LP with {problem.dimension} variables ended as {status.value}')
        objective = np.inf if status is LpStatus.UNBOUNDED else np.nan
        return LpSolution(None, status, objective)

    xstar = np.asarray(result.x, dtype=float)
    return LpSolution(xstar, status, float(problem.c @ xstar))
