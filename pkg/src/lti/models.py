"""Plant model and polyhedral sets.

Contains the discrete-time LTI system x+ = A x + B u and the
H-representation {x | C x <= b} used for state, input and terminal sets.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from settings.solvers import MEMBERSHIP_TOL
from solvers.exc import InvalidProblem
from solvers.linalg import as_matrix, as_vector
from solvers.lp import LpProblem, LpStatus, solve_lp

from .exc import DimensionMismatch, InvalidModel


def _frozen_array(value) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LtiSystem:
    """x_{k+1} = A x_k + B u_k."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        try:
            A = as_matrix(self.A, 'A')
            B = as_matrix(self.B, 'B')
        except InvalidProblem as e:
            raise InvalidModel(str(e)) from e

        if A.shape[0] != A.shape[1]:
            raise InvalidModel(f'A must be square, got {A.shape}')
        if B.shape[0] != A.shape[0]:
            raise InvalidModel(f'B must have {A.shape[0]} rows, got {B.shape}')

        object.__setattr__(self, 'A', _frozen_array(A))
        object.__setattr__(self, 'B', _frozen_array(B))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    def simulate_step(self, x, u) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        if x.shape != (self.n,):
            raise DimensionMismatch(f'State must have shape ({self.n},), got {x.shape}')
        if u.shape != (self.m,):
            raise DimensionMismatch(f'Input must have shape ({self.m},), got {u.shape}')
        return self.A @ x + self.B @ u

    def is_positive(self) -> bool:
        """Whether A and B are elementwise nonnegative."""
        return bool((self.A >= 0).all() and (self.B >= 0).all())


@dataclass(frozen=True, eq=False)
class PolyhedralSet:
    """{x | C x <= b}.

    Emptiness is not checked at construction, see is_empty.
    """

    C: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        b = as_vector(self.b, 'b')
        C = np.asarray(self.C, dtype=float)
        if C.ndim != 2 or C.shape[0] != b.size:
            raise InvalidModel(f'C has shape {C.shape} but b has {b.size} entries')
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(b))):
            raise InvalidModel('Polyhedral set has non-finite data')

        object.__setattr__(self, 'C', _frozen_array(C))
        object.__setattr__(self, 'b', _frozen_array(b))

    @classmethod
    def box(cls, lower, upper) -> 'PolyhedralSet':
        """{lower <= x <= upper}, infinite bounds produce no row."""
        lower = as_vector(lower, 'lower')
        upper = as_vector(upper, 'upper')
        if lower.shape != upper.shape:
            raise DimensionMismatch(f'Bounds of shapes {lower.shape} and {upper.shape}')

        eye = np.eye(upper.size)
        finite_upper = np.isfinite(upper)
        finite_lower = np.isfinite(lower)
        C = np.vstack([eye[finite_upper], -eye[finite_lower]])
        b = np.concatenate([upper[finite_upper], -lower[finite_lower]])
        return cls(C, b)

    @classmethod
    def upper_bounds(cls, upper) -> 'PolyhedralSet':
        return cls.box(np.full(np.size(upper), -np.inf), upper)

    @classmethod
    def universal(cls, dim: int) -> 'PolyhedralSet':
        return cls(np.zeros((0, dim)), np.zeros(0))

    @property
    def dim(self) -> int:
        return self.C.shape[1]

    @property
    def rows(self) -> int:
        return self.C.shape[0]

    @cached_property
    def is_identity(self) -> bool:
        return self.rows == self.dim and np.array_equal(self.C, np.eye(self.dim))

    def apply(self, x: np.ndarray) -> np.ndarray:
        """C @ x, without the product when C is the identity."""
        if self.is_identity:
            return np.array(x, dtype=float)
        return self.C @ x

    def contains(self, x, tol: float = MEMBERSHIP_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f'Point must have shape ({self.dim},), got {x.shape}')
        if not self.rows:
            return True
        return bool(np.all(self.apply(x) <= self.b + tol))

    def support(self, direction) -> float:
        """max c @ x over the set; inf when unbounded, -inf when empty."""
        direction = as_vector(direction, 'direction')
        if direction.size != self.dim:
            raise DimensionMismatch(f'Direction must have {self.dim} entries, got {direction.size}')

        solution = solve_lp(LpProblem(direction, self.C, self.b))
        if solution.status is LpStatus.UNBOUNDED:
            return np.inf
        if solution.status is LpStatus.INFEASIBLE:
            return -np.inf
        return solution.objective

    def is_empty(self) -> bool:
        if not self.rows:
            return False
        solution = solve_lp(LpProblem(np.zeros(self.dim), self.C, self.b))
        return solution.status is LpStatus.INFEASIBLE

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        """Per coordinate LP bounds, infinite where the set is unbounded."""
        eye = np.eye(self.dim)
        upper = np.array([self.support(e) for e in eye])
        lower = np.array([-self.support(-e) for e in eye])
        return lower, upper
