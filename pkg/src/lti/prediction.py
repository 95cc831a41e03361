"""Condensed prediction X = Phi x + Gamma U over a horizon of N steps.

Stacked vectors are step-major: block i (0 based) holds the prediction for
step i + 1.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from common.loggers import logger

from .exc import DimensionMismatch, InvalidModel
from .models import LtiSystem


@dataclass(frozen=True, eq=False)
class PredictionMatrices:
    A: np.ndarray
    Gamma: np.ndarray
    N: int

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.Gamma.shape[1] // self.N

    @cached_property
    def Phi(self) -> np.ndarray:
        """Dense [A; A^2; ...; A^N], built only when asked for."""
        logger.debug(f'Materializing Phi of shape ({self.N * self.n}, {self.n})')
        blocks = [self.A]
        for _ in range(self.N - 1):
            blocks.append(self.A @ blocks[-1])
        Phi = np.vstack(blocks)
        Phi.setflags(write=False)
        return Phi

    def block(self, stacked: np.ndarray, i: int) -> np.ndarray:
        """Rows of step i (1 based) of a stacked array."""
        if not 1 <= i <= self.N:
            raise IndexError(f'Step {i} outside 1..{self.N}')
        return stacked[(i - 1) * self.n:i * self.n]

    def gamma_block(self, i: int) -> np.ndarray:
        return self.block(self.Gamma, i)

    def free_response(self, x) -> np.ndarray:
        """Phi @ x through N matrix-vector products."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionMismatch(f'State must have shape ({self.n},), got {x.shape}')

        z = np.empty(self.N * self.n)
        current = x
        for i in range(self.N):
            current = self.A @ current
            z[i * self.n:(i + 1) * self.n] = current
        return z

    def predict(self, x, U) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        if U.shape != (self.N * self.m,):
            raise DimensionMismatch(f'Input sequence must have shape ({self.N * self.m},), got {U.shape}')
        return self.free_response(x) + self.Gamma @ U


def build_prediction(sys: LtiSystem, N: int) -> PredictionMatrices:
    if int(N) != N or N < 1:
        raise InvalidModel(f'Horizon must be a positive integer, got {N}')
    N = int(N)
    n, m = sys.n, sys.m

    # A^k B for k = 0..N-1
    powers = [sys.B]
    for _ in range(N - 1):
        powers.append(sys.A @ powers[-1])

    Gamma = np.zeros((N * n, N * m))
    for i in range(N):
        for j in range(i + 1):
            Gamma[i * n:(i + 1) * n, j * m:(j + 1) * m] = powers[i - j]
    Gamma.setflags(write=False)

    logger.debug(f'Built prediction matrices for n={n}, m={m}, N={N}')
    return PredictionMatrices(sys.A, Gamma, N)
