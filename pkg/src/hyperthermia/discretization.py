"""1D heat equation on [0, 1] with Robin boundaries.

    dT/dt = alpha d2T/dr2 - beta T + sum_k b_k(r) u_k
    dT/dr(0) = gamma T(0),  dT/dr(1) = -gamma T(1)

Central differences on n nodes with spacing h = 1 / (n - 1); the boundary
rows eliminate a ghost node. Sampling uses a zero-order hold.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import scipy.sparse

from common.loggers import logger
from lti.models import LtiSystem
from settings.solvers import NEGATIVE_ENTRY_TOL
from solvers.linalg import as_vector, matrix_exponential

from .exc import ScenarioRejected


@dataclass(frozen=True)
class GaussianComponent:
    center: float
    width: float
    weight: float = 1.0

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        return self.weight * np.exp(-((r - self.center) / self.width) ** 2)


@dataclass(frozen=True)
class ActuatorProfile:
    """Heat deposition of one actuator at full power."""

    amplitude: float
    components: Tuple[GaussianComponent, ...]

    @classmethod
    def create_from(cls, data: dict) -> 'ActuatorProfile':
        components = tuple(GaussianComponent(**component) for component in data['components'])
        return cls(float(data['amplitude']), components)

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        return self.amplitude * sum(component.evaluate(r) for component in self.components)

    def dump(self) -> dict:
        return {
            'amplitude': self.amplitude,
            'components': [vars(component) for component in self.components],
        }


# one profile centered on the tumor, one with a healthy-tissue hot spot
DEFAULT_ACTUATORS = (
    ActuatorProfile(0.5, (GaussianComponent(0.75, 0.1),)),
    ActuatorProfile(0.5, (GaussianComponent(0.3, 0.12, 0.6), GaussianComponent(0.75, 0.2, 0.4))),
)


def grid(n: int) -> np.ndarray:
    if n < 3:
        raise ScenarioRejected(f'The grid needs at least 3 nodes, got {n}')
    return np.linspace(0.0, 1.0, n)


def laplacian(n: int, gamma: float) -> scipy.sparse.csr_matrix:
    """Second difference with the Robin ghost nodes eliminated, divided by h^2."""
    h = 1.0 / (n - 1)
    main = np.full(n, -2.0)
    main[[0, -1]] = -2.0 - 2.0 * h * gamma
    upper = np.ones(n - 1)
    lower = np.ones(n - 1)
    upper[0] = 2.0
    lower[-1] = 2.0
    return scipy.sparse.diags([lower, main, upper], [-1, 0, 1], format='csr') / h ** 2


def _sample_profiles(r: np.ndarray, profiles: Sequence) -> np.ndarray:
    columns = []
    for profile in profiles:
        if hasattr(profile, 'evaluate'):
            columns.append(profile.evaluate(r))
            continue
        column = as_vector(profile, 'profile')
        if column.size != r.size:
            raise ScenarioRejected(f'Sampled profile has {column.size} entries, the grid has {r.size}')
        columns.append(column)
    if not columns:
        raise ScenarioRejected('At least one actuator profile is required')
    return np.column_stack(columns)


def continuous_model(n: int, alpha: float, beta: float, gamma: float,
                     profiles: Sequence = DEFAULT_ACTUATORS) -> Tuple[np.ndarray, np.ndarray]:
    """Dense (A_c, B_c) of the semi-discretized equation."""
    r = grid(n)
    Ac = alpha * laplacian(n, gamma) - beta * scipy.sparse.identity(n, format='csr')
    return Ac.toarray(), _sample_profiles(r, profiles)


def _clip_roundoff(M: np.ndarray, name: str) -> np.ndarray:
    scale = np.abs(M).max(initial=0.0)
    negative = M < 0
    if not negative.any():
        return M
    worst = M.min()
    if worst < -NEGATIVE_ENTRY_TOL * scale:
        raise ScenarioRejected(f'Discretized {name} has a negative entry {worst!r}, the system is not positive')
    logger.warning(f'Clipping {int(negative.sum())} roundoff entries of {name} down to {worst!r}')
    return np.where(negative, 0.0, M)


def discretize(n: int, dt: float, alpha: float, beta: float, gamma: float,
               profiles: Sequence = DEFAULT_ACTUATORS) -> LtiSystem:
    """Zero-order hold of the semi-discretized heat equation.

    exp([[A_c, B_c], [0, 0]] dt) holds A in the upper left block and B in the
    upper right one, also when A_c is singular.
    """
    if dt <= 0:
        raise ScenarioRejected(f'Sampling time must be positive, got {dt}')
    if min(alpha, beta, gamma) < 0:
        raise ScenarioRejected('alpha, beta and gamma must be nonnegative')

    Ac, Bc = continuous_model(n, alpha, beta, gamma, profiles)
    m = Bc.shape[1]

    augmented = np.zeros((n + m, n + m))
    augmented[:n, :n] = Ac
    augmented[:n, n:] = Bc
    E = matrix_exponential(augmented * dt)

    A = _clip_roundoff(E[:n, :n], 'A')
    B = _clip_roundoff(E[:n, n:], 'B')
    logger.info(f'Discretized heat equation: n={n}, m={m}, dt={dt}')
    return LtiSystem(A, B)
