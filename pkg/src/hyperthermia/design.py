"""Offline design of the heat scenario: terminal set, references, tubes.

All three rely on A and B being elementwise nonnegative.
"""
from typing import Tuple

import numpy as np

from common.loggers import logger
from lti.models import LtiSystem
from reach.sets import UNIVERSAL, BoxSet
from reach.tubes import ReachTubes, forward_box_recursion
from solvers.lp import LpProblem, LpStatus, solve_lp

from .exc import DesignFailure, ScenarioRejected


def _require_positive(sys: LtiSystem):
    if not sys.is_positive():
        raise ScenarioRejected('The design needs elementwise nonnegative A and B')


def _repair_invariance(A: np.ndarray, T: np.ndarray, Tmax: np.ndarray) -> np.ndarray:
    """Push LP roundoff out of (A - I) T <= 0 while keeping 0 <= T <= Tmax.

    Adding s 1 helps by the decay margin of A on constants, rescaling keeps
    the cone condition.
    """
    excess = float(np.max(A @ T - T, initial=0.0))
    if excess <= 0:
        return T

    margin = float(np.min(np.ones(T.size) - A.sum(axis=1)))
    if margin <= 0:
        logger.warning(f'Terminal LP solution violates invariance by {excess!r} and A has no decay margin')
        return T

    repaired = T + 2.0 * excess / margin
    scale = min(1.0, float(np.min(Tmax / repaired)))
    logger.debug(f'Repaired terminal set: excess {excess!r}, rescaled by {scale!r}')
    return repaired * scale


def terminal_set(sys: LtiSystem, Tmax) -> np.ndarray:
    """Largest sum T with (A - I) T <= 0 and 0 <= T <= Tmax.

    {x | x <= T} is then positively invariant under u = 0.
    """
    _require_positive(sys)
    Tmax = np.asarray(Tmax, dtype=float)
    n = sys.n

    solution = solve_lp(LpProblem(np.ones(n), sys.A - np.eye(n), np.zeros(n), lb=0.0, ub=Tmax))
    if solution.status is not LpStatus.OPTIMAL:
        raise DesignFailure(f'Terminal set LP ended as {solution.status.value}')

    T = np.clip(solution.xstar, 0.0, Tmax)
    T = _repair_invariance(sys.A, T, Tmax)
    logger.info(f'Terminal set: sum {T.sum()!r} of {Tmax.sum()!r}')
    return T


def references(sys: LtiSystem, Tmax, tumor) -> Tuple[np.ndarray, np.ndarray]:
    """Steady state maximizing the tumor temperature within the limits.

    With S = (I - A)^-1 B the equilibrium for a constant u is S u; the LP
    maximizes the tumor sum of S u subject to S u <= Tmax and 0 <= u <= 1.
    """
    Tmax = np.asarray(Tmax, dtype=float)
    tumor = np.asarray(tumor, dtype=bool)
    n = sys.n

    try:
        S = np.linalg.solve(np.eye(n) - sys.A, sys.B)
    except np.linalg.LinAlgError as e:
        raise ScenarioRejected('I - A is singular, the plant has no unique equilibrium') from e

    finite = np.isfinite(Tmax)
    solution = solve_lp(LpProblem(S[tumor].sum(axis=0), S[finite], Tmax[finite], lb=0.0, ub=1.0))
    if solution.status is not LpStatus.OPTIMAL:
        raise DesignFailure(f'Reference LP ended as {solution.status.value}')

    uref = np.clip(solution.xstar, 0.0, 1.0)
    xref = S @ uref
    logger.info(f'References: uref {uref.tolist()}, peak tumor temperature {xref[tumor].max(initial=0.0)!r}')
    return xref, uref


def backward_margins(sys: LtiSystem, Tterminal, steps: int) -> np.ndarray:
    """delta_j: the most state j can exceed its terminal bound and still reach it in the given steps with u = 0.

    With M = A^steps this is min_k T_k / M_kj - T_j over rows with M_kj > 0,
    infinite for a zero column.
    """
    T = np.asarray(Tterminal, dtype=float)
    M = np.linalg.matrix_power(sys.A, steps)

    with np.errstate(divide='ignore', over='ignore'):
        ratios = np.where(M > 0, T[:, None] / np.where(M > 0, M, 1.0), np.inf)
    delta = ratios.min(axis=0) - T

    negative = delta < 0
    if negative.any():
        logger.warning(f'Clamping {int(negative.sum())} negative backward margins, worst {delta.min()!r}')
        delta = np.where(negative, 0.0, delta)
    return delta


def case_tubes(sys: LtiSystem, Tterminal, N: int) -> ReachTubes:
    """Tubes of the positive plant with inputs in [0, 1]^m.

    Forward box i is [0, sum_{k<i} A^k B 1]; backward box i < N is
    [0, Tterminal + delta] for N - i steps to go.
    """
    _require_positive(sys)
    T = np.asarray(Tterminal, dtype=float)

    inputs = BoxSet.from_bounds(np.zeros(sys.m), np.ones(sys.m))
    forward = forward_box_recursion(sys, inputs, N)

    backward = []
    for i in range(1, N):
        upper = T + backward_margins(sys, T, N - i)
        backward.append(BoxSet.from_bounds(np.zeros(sys.n), upper))
    backward.append(UNIVERSAL)

    logger.info(f'Case study tubes over {N} steps')
    return ReachTubes(forward, backward, nonnegative=True)
