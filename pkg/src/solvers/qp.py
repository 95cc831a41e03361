"""Dense convex quadratic programs.

    minimize    1/2 u' H u + f' u
    subject to  Aineq u <= bineq

solved with a primal active-set method. H is factored once (H = G G') and
every working-set subproblem is solved through that factor, so a solve
costs one Cholesky factorization plus small least-squares systems whose
size is the working set. A feasible warm start (the shifted previous
optimal sequence in receding horizon use) skips the phase one LP.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional

import numpy as np
import scipy.linalg

from common.loggers import logger
from settings.solvers import ITERATION_FACTOR, STEP_TOL, TOL_KKT

from .exc import InvalidProblem
from .linalg import as_matrix, as_vector, cholesky_lower
from .lp import LpProblem, LpStatus, solve_lp


class QpStatus(str, Enum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    MAX_ITER = 'max_iter'


@dataclass(frozen=True, eq=False)
class QpProblem:
    """Strictly convex QP with inequality constraints.

    The Cholesky factor G may be handed over when the caller already owns it
    (the condensed MPC problem does), otherwise it is computed here and a
    non positive definite H is rejected.
    """

    H: np.ndarray
    f: np.ndarray
    Aineq: np.ndarray
    bineq: np.ndarray
    G: Optional[np.ndarray] = None

    def __post_init__(self):
        H = as_matrix(self.H, 'H')
        f = as_vector(self.f, 'f')
        if H.shape != (f.size, f.size):
            raise InvalidProblem(f'H has shape {H.shape} but f has {f.size} entries')

        bineq = as_vector(self.bineq, 'bineq')
        Aineq = np.asarray(self.Aineq, dtype=float).reshape(bineq.size, f.size)
        if not np.all(np.isfinite(Aineq)):
            raise InvalidProblem('Aineq has non-finite entries')

        G = cholesky_lower(H) if self.G is None else as_matrix(self.G, 'G')

        object.__setattr__(self, 'H', H)
        object.__setattr__(self, 'f', f)
        object.__setattr__(self, 'Aineq', Aineq)
        object.__setattr__(self, 'bineq', bineq)
        object.__setattr__(self, 'G', G)

    @property
    def variables(self) -> int:
        return self.f.size

    @property
    def rows(self) -> int:
        return self.bineq.size

    def objective(self, u: np.ndarray) -> float:
        return float(0.5 * u @ self.H @ u + self.f @ u)

    def violation(self, u: np.ndarray) -> float:
        """Largest constraint violation at u, zero when feasible."""
        if not self.rows:
            return 0.0
        return float(max((self.Aineq @ u - self.bineq).max(), 0.0))

    def unconstrained_minimizer(self) -> np.ndarray:
        return -scipy.linalg.cho_solve((self.G, True), self.f)


@dataclass(frozen=True, eq=False)
class QpSolution:
    status: QpStatus
    ustar: Optional[np.ndarray] = None
    multipliers: Optional[np.ndarray] = None
    active: tuple = ()
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is QpStatus.OPTIMAL


class KktResiduals(NamedTuple):
    stationarity: float
    primal: float
    complementarity: float

    def max(self) -> float:
        return max(self)


def kkt_residuals(problem: QpProblem, solution: QpSolution) -> KktResiduals:
    u, lam = solution.ustar, solution.multipliers
    gradient = problem.H @ u + problem.f
    if problem.rows:
        gradient = gradient + problem.Aineq.T @ lam
        slack = problem.Aineq @ u - problem.bineq
        primal = float(max(slack.max(), 0.0))
        complementarity = float(np.abs(lam * slack).max())
    else:
        primal = complementarity = 0.0
    return KktResiduals(float(np.abs(gradient).max(initial=0.0)), primal, complementarity)


def solve_qp(problem: QpProblem, warm: Optional[np.ndarray] = None,
             tol_kkt: float = TOL_KKT, max_iter: Optional[int] = None) -> QpSolution:
    """Solve the QP, starting from warm when it is feasible."""
    if max_iter is None:
        max_iter = ITERATION_FACTOR * (problem.variables + problem.rows)

    u = problem.unconstrained_minimizer()
    if problem.violation(u) <= tol_kkt:
        return QpSolution(QpStatus.OPTIMAL, u, np.zeros(problem.rows))

    u = _starting_point(problem, warm, tol_kkt)
    if u is None:
        return QpSolution(QpStatus.INFEASIBLE)

    A, b = problem.Aineq, problem.bineq
    row_norms = np.linalg.norm(A, axis=1)
    working: List[int] = []

    for iteration in range(1, max_iter + 1):
        gradient = problem.H @ u + problem.f
        step, lam_w = _working_set_step(problem.G, A[working], gradient)

        if np.abs(step).max() <= STEP_TOL * (1.0 + np.abs(u).max()):
            if not working or lam_w.min() >= -tol_kkt:
                multipliers = np.zeros(problem.rows)
                multipliers[working] = np.maximum(lam_w, 0.0)
                return QpSolution(QpStatus.OPTIMAL, u, multipliers, tuple(sorted(working)), iteration)

            # the most negative multiplier leaves the working set
            working.pop(int(np.argmin(lam_w)))
            continue

        alpha, blocking = _ratio_test(A, b, u, step, working, row_norms)
        u = u + alpha * step
        if blocking is not None:
            working.append(blocking)

    logger.warning(f'Active-set QP stopped after {max_iter} iterations')
    return QpSolution(QpStatus.MAX_ITER, u, np.zeros(problem.rows), tuple(sorted(working)), max_iter)


def _starting_point(problem: QpProblem, warm: Optional[np.ndarray], tol: float) -> Optional[np.ndarray]:
    if warm is not None:
        warm = as_vector(warm, 'warm')
        if warm.size == problem.variables and problem.violation(warm) <= tol:
            return warm.copy()
        logger.debug('Warm start is infeasible, running phase one')

    phase_one = solve_lp(LpProblem(np.zeros(problem.variables), problem.Aineq, problem.bineq))
    if phase_one.status is not LpStatus.OPTIMAL:
        return None
    return phase_one.xstar


def _working_set_step(G: np.ndarray, A_w: np.ndarray, gradient: np.ndarray):
    """Minimize 1/2 p'Hp + g'p subject to A_w p = 0.

    With H = G G', y = G^-1 g and Y = G^-1 A_w' the multipliers solve the
    least squares problem min |y + Y lam| and p = -G^-T (y + Y lam).
    """
    y = scipy.linalg.solve_triangular(G, gradient, lower=True)
    if A_w.shape[0] == 0:
        return -scipy.linalg.solve_triangular(G.T, y, lower=False), np.zeros(0)

    Y = scipy.linalg.solve_triangular(G, A_w.T, lower=True)
    lam, *_ = np.linalg.lstsq(Y, -y, rcond=None)
    step = -scipy.linalg.solve_triangular(G.T, y + Y @ lam, lower=False)
    return step, lam


def _ratio_test(A, b, u, step, working, row_norms):
    """Longest step in [0, 1] keeping every row feasible and the row that blocks it."""
    if not A.shape[0]:
        return 1.0, None

    rate = A @ step
    candidates = rate > STEP_TOL * row_norms * np.linalg.norm(step)
    candidates[working] = False
    if not candidates.any():
        return 1.0, None

    indices = np.flatnonzero(candidates)
    slack = np.maximum(b[indices] - A[indices] @ u, 0.0)
    ratios = slack / rate[indices]
    position = int(np.argmin(ratios))
    if ratios[position] >= 1.0:
        return 1.0, None
    return float(ratios[position]), int(indices[position])


def violated_rows(problem: QpProblem, tol: float = TOL_KKT, hard: Optional[np.ndarray] = None) -> np.ndarray:
    """Rows that cannot be satisfied together, from an elastic phase one LP.

    minimize sum(s)  s.t.  A u - s <= b,  s >= 0

    Rows flagged in hard get no slack. When they are inconsistent on their
    own every row is relaxed.
    """
    q, nv = problem.rows, problem.variables
    hard = np.zeros(q, dtype=bool) if hard is None else np.asarray(hard, dtype=bool)
    if hard.shape != (q,):
        raise InvalidProblem(f'Hard row mask must have shape ({q},), got {hard.shape}')

    soft = np.flatnonzero(~hard)
    slack = np.zeros((q, soft.size))
    slack[soft, np.arange(soft.size)] = -1.0
    Aineq = np.hstack([problem.Aineq, slack])
    c = np.concatenate([np.zeros(nv), -np.ones(soft.size)])
    lb = np.concatenate([np.full(nv, -np.inf), np.zeros(soft.size)])
    solution = solve_lp(LpProblem(c, Aineq, problem.bineq, lb=lb))
    if solution.status is LpStatus.INFEASIBLE and hard.any():
        logger.warning('Hard rows are inconsistent on their own, relaxing every row')
        return violated_rows(problem, tol)
    if solution.status is not LpStatus.OPTIMAL:
        return np.arange(q)
    return soft[solution.xstar[nv:] > tol]
