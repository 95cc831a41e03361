from typing import Optional, Tuple

import numpy as np

from common.loggers import logger
from settings.solvers import TOL_KKT
from solvers.exc import NumericalFailure
from solvers.qp import QpSolution, QpStatus, solve_qp, violated_rows

from .condense import CondensedQp
from .exc import Infeasible


def solve_full(cq: CondensedQp, x, warm: Optional[np.ndarray] = None,
               offsets: Optional[np.ndarray] = None, tol_kkt: float = TOL_KKT) -> QpSolution:
    """Solve the MPC problem at x with every stacked row."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise Infeasible('State has non-finite entries')
    return solve_qp(cq.qp(x, offsets=offsets), warm=warm, tol_kkt=tol_kkt)


def infeasibility_report(cq: CondensedQp, x, offsets: Optional[np.ndarray] = None) -> Infeasible:
    """Infeasible carrying the labels of the rows an elastic LP has to relax.

    Input rows stay hard, so the report names the state and terminal rows
    no admissible input sequence satisfies.
    """
    hard = np.zeros(cq.rows, dtype=bool)
    hard[cq.input_slice()] = True
    rows = violated_rows(cq.qp(x, offsets=offsets), hard=hard)
    labels = [cq.describe_row(int(r)) for r in rows]
    preview = ', '.join(f'{label.kind.value}[{label.step}, {label.index}]' for label in labels[:5])
    if len(labels) > 5:
        preview += f' and {len(labels) - 5} more'
    return Infeasible(f'MPC problem is infeasible at the current state, violated rows: {preview}', rows=labels)


def mpc_law(cq: CondensedQp, x, warm: Optional[np.ndarray] = None,
            tol_kkt: float = TOL_KKT) -> Tuple[np.ndarray, np.ndarray]:
    """First input and optimal sequence of the full MPC problem."""
    offsets = cq.offsets(x)
    solution = solve_full(cq, x, warm=warm, offsets=offsets, tol_kkt=tol_kkt)

    if solution.status is QpStatus.INFEASIBLE:
        raise infeasibility_report(cq, x, offsets)
    if solution.status is QpStatus.MAX_ITER:
        raise NumericalFailure(f'QP did not converge in {solution.iterations} iterations')

    logger.debug(f'MPC law solved with {len(solution.active)} active rows')
    return solution.ustar[:cq.problem.m].copy(), solution.ustar
