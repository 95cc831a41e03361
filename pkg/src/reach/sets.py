"""Outer approximation geometries.

BoxSet       {x | -l <= P (x - q) <= l}, P = I when axis aligned
EllipsoidSet {x | |L' (x - q)| <= 1}
UNIVERSAL    the whole space, used for the last step of backward tubes

Infinite half-widths mean the coordinate is unbounded; the center stays
finite.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from settings.solvers import MEMBERSHIP_TOL, PIVOT_THRESHOLD
from solvers.linalg import as_matrix, as_vector

from .exc import InvalidSet


def abs_bound(W: np.ndarray, l: np.ndarray) -> np.ndarray:
    """|W| @ l where a zero coefficient times an infinite width is zero."""
    W = np.asarray(W, dtype=float)
    finite = np.isfinite(l)
    bound = np.abs(W[..., finite]) @ l[finite]
    if not finite.all():
        unbounded = np.any(W[..., ~finite] != 0, axis=-1)
        bound = np.where(unbounded, np.inf, bound)
    return bound


def _checked_lu(M: np.ndarray, name: str):
    if M.shape[0] != M.shape[1]:
        raise InvalidSet(f'{name} must be square, got {M.shape}')
    lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min(initial=np.inf) <= PIVOT_THRESHOLD * max(pivots.max(initial=0.0), 1.0):
        raise InvalidSet(f'{name} is singular to working precision')
    return lu, piv


@dataclass(frozen=True, eq=False)
class BoxSet:
    q: np.ndarray
    l: np.ndarray
    P: Optional[np.ndarray] = None

    def __post_init__(self):
        q = as_vector(self.q, 'q')
        l = np.broadcast_to(as_vector(self.l, 'l'), q.shape).astype(float)
        if not np.all(np.isfinite(q)):
            raise InvalidSet('Box center must be finite')
        if np.isnan(l).any() or (l < 0).any():
            raise InvalidSet('Box half-widths must be nonnegative')

        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'l', l)

        if self.P is not None:
            P = as_matrix(self.P, 'P')
            if P.shape != (q.size, q.size):
                raise InvalidSet(f'P must have shape ({q.size}, {q.size}), got {P.shape}')
            if np.array_equal(P, np.eye(q.size)):
                object.__setattr__(self, 'P', None)
            else:
                object.__setattr__(self, 'P', P)
                object.__setattr__(self, '_lu', _checked_lu(P, 'P'))

    @classmethod
    def from_bounds(cls, lower, upper) -> 'BoxSet':
        """Axis-aligned [lower, upper], bounds may be infinite."""
        lower = as_vector(lower, 'lower')
        upper = as_vector(upper, 'upper')
        if lower.shape != upper.shape or (lower > upper).any():
            raise InvalidSet('Lower bounds must not exceed upper bounds')

        has_lower, has_upper = np.isfinite(lower), np.isfinite(upper)
        both = has_lower & has_upper

        center = np.zeros_like(lower)
        center[both] = 0.5 * (lower[both] + upper[both])
        center[has_upper & ~has_lower] = upper[has_upper & ~has_lower]
        center[has_lower & ~has_upper] = lower[has_lower & ~has_upper]

        half = np.full_like(lower, np.inf)
        half[both] = 0.5 * (upper[both] - lower[both])
        return cls(center, half)

    @classmethod
    def point(cls, x) -> 'BoxSet':
        x = as_vector(x, 'x')
        return cls(x, np.zeros_like(x))

    @property
    def dim(self) -> int:
        return self.q.size

    @property
    def axis_aligned(self) -> bool:
        return self.P is None

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self.axis_aligned:
            raise InvalidSet('Only axis-aligned boxes have coordinate bounds')
        return self.q - self.l, self.q + self.l

    def transform_rows(self, C) -> np.ndarray:
        """C P^-1, row by row."""
        C = np.asarray(C, dtype=float)
        if self.axis_aligned:
            return C
        return scipy.linalg.lu_solve(self._lu, C.T, trans=1).T

    def max_linear(self, C) -> np.ndarray:
        """max over the box of each row of C; a float for a single row."""
        C = np.asarray(C, dtype=float)
        value = C @ self.q + abs_bound(self.transform_rows(C), self.l)
        return float(value) if C.ndim == 1 else value

    def contains(self, x, tol: float = MEMBERSHIP_TOL) -> bool:
        y = np.asarray(x, dtype=float) - self.q
        if not self.axis_aligned:
            y = self.P @ y
        return bool(np.all(np.abs(y) <= self.l + tol))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if not np.all(np.isfinite(self.l)):
            raise InvalidSet('Cannot sample an unbounded box')
        y = rng.uniform(-1.0, 1.0, size=(count, self.dim)) * self.l
        if not self.axis_aligned:
            y = scipy.linalg.lu_solve(self._lu, y.T).T
        return self.q + y

    def scaled(self, factor: float) -> 'BoxSet':
        return BoxSet(self.q, self.l * factor, self.P)

    def shifted(self, offset) -> 'BoxSet':
        return BoxSet(self.q + np.asarray(offset, dtype=float), self.l, self.P)


@dataclass(frozen=True, eq=False)
class EllipsoidSet:
    L: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        L = as_matrix(self.L, 'L')
        q = as_vector(self.q, 'q')
        if L.shape != (q.size, q.size):
            raise InvalidSet(f'L must have shape ({q.size}, {q.size}), got {L.shape}')

        object.__setattr__(self, 'L', L)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, '_lu', _checked_lu(L, 'L'))

    @property
    def dim(self) -> int:
        return self.q.size

    def max_linear(self, C) -> np.ndarray:
        """c q + |L^-1 c'| for each row c of C."""
        C = np.asarray(C, dtype=float)
        radius = np.linalg.norm(scipy.linalg.lu_solve(self._lu, C.T), axis=0)
        value = C @ self.q + radius
        return float(value) if C.ndim == 1 else value

    def contains(self, x, tol: float = MEMBERSHIP_TOL) -> bool:
        y = self.L.T @ (np.asarray(x, dtype=float) - self.q)
        return bool(np.linalg.norm(y) <= 1.0 + tol)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        direction = rng.standard_normal((count, self.dim))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        radius = rng.uniform(size=(count, 1)) ** (1.0 / self.dim)
        y = direction * radius
        # x = q + L^-T y
        return self.q + scipy.linalg.lu_solve(self._lu, y.T, trans=1).T


class UniversalSet:
    """Marker for the unconstrained set."""

    dim = None

    def max_linear(self, C) -> np.ndarray:
        C = np.asarray(C, dtype=float)
        return np.inf if C.ndim == 1 else np.full(C.shape[0], np.inf)

    def contains(self, x, tol: float = MEMBERSHIP_TOL) -> bool:
        return True

    def __repr__(self):
        return 'UNIVERSAL'


UNIVERSAL = UniversalSet()
