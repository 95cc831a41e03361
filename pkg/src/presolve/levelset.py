"""Cost level set through a feasible candidate sequence.

J(x, U) = 1/2 |G' (U - q)|^2 + const with q = -H^-1 f(x), so

    {U | J(x, U) <= J(x, Utilde)} = {U | |L' (U - q)| <= 1},  L = G / rho

with rho = |G' (Utilde - q)|.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
import scipy.linalg

from mpc.condense import CondensedQp
from reach.sets import EllipsoidSet
from settings.solvers import DEGENERATE_RHO, FEASIBILITY_TOL, MEMBERSHIP_TOL

from .exc import InfeasibleCandidate


@dataclass(frozen=True, eq=False)
class LevelSetEllipse:
    G: np.ndarray
    q: np.ndarray
    rho: float

    @property
    def degenerate(self) -> bool:
        """The level set collapsed to the point q."""
        return self.rho <= DEGENERATE_RHO

    @cached_property
    def L(self) -> np.ndarray:
        if self.degenerate:
            raise ValueError('A degenerate level set has no shape matrix')
        return self.G / self.rho

    def as_ellipsoid(self) -> EllipsoidSet:
        return EllipsoidSet(self.L, self.q)

    def max_linear(self, C, dual_norms: Optional[np.ndarray] = None) -> np.ndarray:
        """c q + rho |G^-1 c'| per row, c q alone when degenerate.

        dual_norms are |G^-1 c'| when the caller has them already.
        """
        C = np.asarray(C, dtype=float)
        value = C @ self.q
        if self.degenerate:
            return value
        if dual_norms is None:
            dual_norms = np.linalg.norm(scipy.linalg.solve_triangular(self.G, C.T, lower=True), axis=0)
        return value + self.rho * dual_norms

    def contains(self, U, tol: float = MEMBERSHIP_TOL) -> bool:
        distance = np.linalg.norm(self.G.T @ (np.asarray(U, dtype=float) - self.q))
        return bool(distance <= self.rho + tol * max(self.rho, 1.0))


def level_set(cq: CondensedQp, x, Utilde, offsets: Optional[np.ndarray] = None,
              tol: float = FEASIBILITY_TOL) -> LevelSetEllipse:
    """Level set of the cost at x through Utilde, which must be feasible."""
    Utilde = np.asarray(Utilde, dtype=float)
    if Utilde.shape != (cq.variables,):
        raise InfeasibleCandidate(f'Candidate must have {cq.variables} entries, got shape {Utilde.shape}')
    if offsets is None:
        offsets = cq.offsets(x)

    violated = np.flatnonzero(cq.Chat @ Utilde > offsets + tol)
    if violated.size:
        raise InfeasibleCandidate(f'Candidate sequence violates {violated.size} stacked rows', rows=violated)

    q = -scipy.linalg.cho_solve((cq.G, True), cq.f(x))
    rho = float(np.linalg.norm(cq.G.T @ (Utilde - q)))
    return LevelSetEllipse(cq.G, q, rho)
