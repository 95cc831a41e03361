"""Condensed form of the MPC problem in the input sequence U.

    J(x, U) = 1/2 U' G G' U + f(x)' U + c(x),   f(x) = Fx x + f0

The stacked rows are step-major: Xset rows for steps 1..N-1, XT rows for
step N, then the Uset rows of u_0..u_{N-1}. A state row j at step i reads

    chat[j, i] U <= b_j - c_j z_i(x)

where z_i(x) = A^i x is the free response. chat and the dual norms
|chat G^-T| are state independent and computed here once.
"""
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from common.loggers import logger
from lti.models import PolyhedralSet
from lti.prediction import PredictionMatrices, build_prediction
from solvers.linalg import cholesky_lower
from solvers.qp import QpProblem

from .models import MpcProblem


class RowKind(str, Enum):
    STATE = 'state'
    TERMINAL = 'terminal'
    INPUT = 'input'


class RowLabel(NamedTuple):
    kind: RowKind
    step: int
    index: int


@dataclass(frozen=True, eq=False)
class CondensedQp:
    problem: MpcProblem
    prediction: PredictionMatrices
    H: np.ndarray
    G: np.ndarray
    Fx: np.ndarray
    f0: np.ndarray
    Chat: np.ndarray
    b: np.ndarray
    dual_norms: np.ndarray

    @property
    def N(self) -> int:
        return self.problem.N

    @property
    def variables(self) -> int:
        return self.f0.size

    @property
    def rows(self) -> int:
        return self.b.size

    @property
    def state_rows(self) -> int:
        """Rows of Xset and XT over the horizon, input rows excluded."""
        return (self.N - 1) * self.problem.Xset.rows + self.problem.XT.rows

    def step_set(self, i: int) -> PolyhedralSet:
        return self.problem.XT if i == self.N else self.problem.Xset

    def step_slice(self, i: int) -> slice:
        """Stacked rows of the state constraints at step i (1 based)."""
        if not 1 <= i <= self.N:
            raise IndexError(f'Step {i} outside 1..{self.N}')
        start = (i - 1) * self.problem.Xset.rows
        return slice(start, start + self.step_set(i).rows)

    def input_slice(self) -> slice:
        return slice(self.state_rows, self.rows)

    def describe_row(self, r: int) -> RowLabel:
        if not 0 <= r < self.rows:
            raise IndexError(f'Row {r} outside 0..{self.rows - 1}')

        nx = self.problem.Xset.rows
        if r >= self.state_rows:
            step, index = divmod(r - self.state_rows, self.problem.Uset.rows)
            return RowLabel(RowKind.INPUT, step, index)
        if r >= (self.N - 1) * nx:
            return RowLabel(RowKind.TERMINAL, self.N, r - (self.N - 1) * nx)
        step, index = divmod(r, nx)
        return RowLabel(RowKind.STATE, step + 1, index)

    def free_response(self, x) -> np.ndarray:
        return self.prediction.free_response(x)

    def f(self, x) -> np.ndarray:
        return self.Fx @ np.asarray(x, dtype=float) + self.f0

    def c(self, x, z: Optional[np.ndarray] = None) -> float:
        p = self.problem
        x = np.asarray(x, dtype=float)
        if z is None:
            z = self.free_response(x)

        dx = x - p.xref
        total = dx @ p.Q @ dx + self.N * (p.uref @ p.R @ p.uref)
        for i in range(1, self.N + 1):
            dz = self.prediction.block(z, i) - p.xref
            weight = p.P if i == self.N else p.Q
            total += dz @ weight @ dz
        return float(total)

    def cost(self, x, U, z: Optional[np.ndarray] = None) -> float:
        U = np.asarray(U, dtype=float)
        half = self.G.T @ U
        return float(0.5 * half @ half + self.f(x) @ U + self.c(x, z))

    def offsets(self, x, z: Optional[np.ndarray] = None) -> np.ndarray:
        """Right-hand sides b_j - c_j z_i(x) of every stacked row."""
        if z is None:
            z = self.free_response(x)

        bhat = self.b.copy()
        for i in range(1, self.N + 1):
            rows = self.step_slice(i)
            bhat[rows] -= self.step_set(i).apply(self.prediction.block(z, i))
        return bhat

    def qp(self, x, rows: Optional[np.ndarray] = None, offsets: Optional[np.ndarray] = None) -> QpProblem:
        """The QP at state x, restricted to the given stacked rows."""
        if offsets is None:
            offsets = self.offsets(x)
        if rows is None:
            return QpProblem(self.H, self.f(x), self.Chat, offsets, G=self.G)
        return QpProblem(self.H, self.f(x), self.Chat[rows], offsets[rows], G=self.G)

    def predicted_state(self, z: np.ndarray, U, i: int) -> np.ndarray:
        """x_i = z_i + Gamma_i U."""
        return self.prediction.block(z, i) + self.prediction.gamma_block(i) @ np.asarray(U, dtype=float)


def condense(problem: MpcProblem) -> CondensedQp:
    p = problem
    N, m = p.N, p.m
    prediction = build_prediction(p.sys, N)

    # W_i = Gamma_i' Q_i with Q_N = P
    weighted = [prediction.gamma_block(i).T @ (p.P if i == N else p.Q) for i in range(1, N + 1)]

    H = sum(W @ prediction.gamma_block(i) for i, W in enumerate(weighted, start=1))
    H = 2.0 * (H + np.kron(np.eye(N), p.R))
    H = 0.5 * (H + H.T)
    G = cholesky_lower(H)

    # Fx = 2 sum_i W_i A^i, by Horner
    acc = weighted[-1]
    for W in reversed(weighted[:-1]):
        acc = acc @ p.sys.A + W
    Fx = 2.0 * acc @ p.sys.A

    f0 = -2.0 * sum(weighted) @ p.xref - 2.0 * np.tile(p.R @ p.uref, N)

    blocks, rhs = [], []
    for i in range(1, N + 1):
        set_ = p.XT if i == N else p.Xset
        blocks.append(set_.apply(prediction.gamma_block(i)))
        rhs.append(set_.b)
    for k in range(N):
        block = np.zeros((p.Uset.rows, N * m))
        block[:, k * m:(k + 1) * m] = p.Uset.C
        blocks.append(block)
        rhs.append(p.Uset.b)

    Chat = np.vstack(blocks)
    b = np.concatenate(rhs)
    dual_norms = np.linalg.norm(scipy.linalg.solve_triangular(G, Chat.T, lower=True), axis=0)

    for array in (H, G, Fx, f0, Chat, b, dual_norms):
        array.setflags(write=False)

    logger.info(f'Condensed MPC problem: n={p.n}, m={m}, N={N}, {b.size} stacked rows')
    return CondensedQp(p, prediction, H, G, Fx, f0, Chat, b, dual_norms)
