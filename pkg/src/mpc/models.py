from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from common.loggers import logger
from lti.models import LtiSystem, PolyhedralSet
from settings.solvers import FEASIBILITY_TOL
from solvers.exc import NotPositiveDefinite
from solvers.linalg import as_matrix, as_vector, cholesky_lower

from .exc import InvalidMpcProblem


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str = ''


@dataclass(frozen=True, eq=False)
class MpcProblem:
    """Tracking MPC with stage cost |x - xr|_Q^2 + |u - ur|_R^2 and terminal cost |x - xr|_P^2.

    Q and R default to identities, P to Q, references and Kaux to zero.
    """

    sys: LtiSystem
    Xset: PolyhedralSet
    Uset: PolyhedralSet
    XT: PolyhedralSet
    N: int
    Q: Optional[np.ndarray] = None
    R: Optional[np.ndarray] = None
    P: Optional[np.ndarray] = None
    xref: Optional[np.ndarray] = None
    uref: Optional[np.ndarray] = None
    Kaux: Optional[np.ndarray] = None

    def __post_init__(self):
        n, m = self.sys.n, self.sys.m

        if int(self.N) != self.N or self.N < 1:
            raise InvalidMpcProblem(f'Horizon must be a positive integer, got {self.N}')
        object.__setattr__(self, 'N', int(self.N))

        for name, set_, dim in (('Xset', self.Xset, n), ('XT', self.XT, n), ('Uset', self.Uset, m)):
            if set_.dim != dim:
                raise InvalidMpcProblem(f'{name} lives in dimension {set_.dim}, expected {dim}')

        Q = np.eye(n) if self.Q is None else as_matrix(self.Q, 'Q')
        R = np.eye(m) if self.R is None else as_matrix(self.R, 'R')
        P = Q if self.P is None else as_matrix(self.P, 'P')
        for name, weight, dim in (('Q', Q, n), ('R', R, m), ('P', P, n)):
            if weight.shape != (dim, dim):
                raise InvalidMpcProblem(f'{name} must have shape ({dim}, {dim}), got {weight.shape}')
            try:
                cholesky_lower(weight)
            except NotPositiveDefinite as e:
                raise InvalidMpcProblem(f'Weight {name} is not symmetric positive definite') from e

        xref = np.zeros(n) if self.xref is None else as_vector(self.xref, 'xref')
        uref = np.zeros(m) if self.uref is None else as_vector(self.uref, 'uref')
        if xref.shape != (n,) or uref.shape != (m,):
            raise InvalidMpcProblem(f'References must have {n} and {m} entries')

        Kaux = np.zeros((m, n)) if self.Kaux is None else np.asarray(self.Kaux, dtype=float)
        if Kaux.shape != (m, n):
            raise InvalidMpcProblem(f'Kaux must have shape ({m}, {n}), got {Kaux.shape}')

        for name, value in (('Q', Q), ('R', R), ('P', P), ('xref', xref), ('uref', uref), ('Kaux', Kaux)):
            value = np.array(value, dtype=float)
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        return self.sys.n

    @property
    def m(self) -> int:
        return self.sys.m

    def closed_loop(self) -> np.ndarray:
        """A + B Kaux."""
        return self.sys.A + self.sys.B @ self.Kaux

    def verify(self, tol: float = FEASIBILITY_TOL) -> List[CheckResult]:
        """LP checks of the terminal ingredients.

        One LP per row, so this is meant for moderate dimensions or for
        terminal sets with few rows.
        """
        results = [
            _rows_bounded('terminal_in_state_set', self.XT, self.Xset.C, self.Xset.b, tol),
            _rows_bounded('terminal_invariance', self.XT, self.XT.C @ self.closed_loop(), self.XT.b, tol),
            _rows_bounded('terminal_input_admissible', self.XT, self.Uset.C @ self.Kaux, self.Uset.b, tol),
        ]
        for result in results:
            logger.debug(f'Check {result.name}: {"passed" if result.passed else "failed"} {result.detail}')
        return results


def _rows_bounded(name: str, domain: PolyhedralSet, C: np.ndarray, b: np.ndarray, tol: float) -> CheckResult:
    for j, (row, bound) in enumerate(zip(C, b)):
        value = domain.support(row)
        if value > bound + tol:
            return CheckResult(name, False, f'row {j}: {value!r} > {bound!r}')
    return CheckResult(name, True)


def stage_cost(problem: MpcProblem, x, U) -> float:
    """Sum of stage costs plus terminal cost, rolled out step by step."""
    x = np.asarray(x, dtype=float)
    inputs = np.asarray(U, dtype=float).reshape(problem.N, problem.m)

    total = 0.0
    for u in inputs:
        dx, du = x - problem.xref, u - problem.uref
        total += dx @ problem.Q @ dx + du @ problem.R @ du
        x = problem.sys.simulate_step(x, u)

    dx = x - problem.xref
    return float(total + dx @ problem.P @ dx)
