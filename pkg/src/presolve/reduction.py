"""Reduced constraint sets.

Every state or terminal row runs at most three certificates, cheapest
first, and stops at the first success:

    forward   max over the shifted forward box <= b_j - c_j z_i(x)
    backward  max over the backward set <= b_j        (steps 1..N-1)
    ellipse   max over the cost level set in U space <= bhat

Input rows are always kept.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from common.loggers import logger
from mpc.condense import CondensedQp
from reach.exc import InvalidSet
from reach.tubes import ReachTubes
from settings.app import PARALLEL_ROWS, THREADS
from solvers.qp import QpProblem

from .levelset import LevelSetEllipse
from .redundancy import redundant_rows


@dataclass(frozen=True, eq=False)
class TubeSupports:
    """Offline per-row maxima over the tubes.

    forward[r] is the maximum of row r over the unshifted forward box of
    its step, so the shifted test is forward[r] <= bhat[r].
    backward_redundant[r] is the backward test, which is state independent.
    """

    forward: np.ndarray
    backward_redundant: np.ndarray
    backward_rows: int
    nonnegative: bool = False

    @classmethod
    def from_tubes(cls, cq: CondensedQp, tubes: ReachTubes) -> 'TubeSupports':
        if tubes.N != cq.N:
            raise InvalidSet(f'Tubes cover {tubes.N} steps, the problem has {cq.N}')

        forward = np.empty(cq.state_rows)
        backward_redundant = np.zeros(cq.state_rows, dtype=bool)
        for i in range(1, cq.N + 1):
            rows, set_ = cq.step_slice(i), cq.step_set(i)
            forward[rows] = tubes.forward[i - 1].max_linear(set_.C)
            if i < cq.N:
                backward_redundant[rows] = redundant_rows(set_.C, set_.b, tubes.backward[i - 1])

        backward_rows = (cq.N - 1) * cq.problem.Xset.rows
        logger.info(f'Tube supports: {int(backward_redundant.sum())} of {backward_rows} rows '
                    f'redundant on the backward tube')
        return cls(forward, backward_redundant, backward_rows, tubes.nonnegative)

    def backward_applies(self, x) -> bool:
        return not self.nonnegative or bool(np.all(np.asarray(x) >= 0))


@dataclass(frozen=True, eq=False)
class ReducedIndexSets:
    """Retained row indices per step, relative to that step's constraint set."""

    retained: Tuple[np.ndarray, ...]
    state_rows: int
    test_counts: Dict[str, int] = field(default_factory=dict)

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(indices.size for indices in self.retained)

    @property
    def retained_fraction(self) -> float:
        if not self.state_rows:
            return 0.0
        return sum(self.counts) / self.state_rows

    def stacked_rows(self, cq: CondensedQp) -> np.ndarray:
        """Stacked row indices of the reduced problem, input rows included."""
        parts = [cq.step_slice(i).start + indices for i, indices in enumerate(self.retained, start=1)]
        parts.append(np.arange(cq.state_rows, cq.rows))
        return np.concatenate(parts).astype(int)


def _ellipse_redundant(cq: CondensedQp, ls: LevelSetEllipse, rows: np.ndarray,
                       bhat: np.ndarray, threads: int) -> np.ndarray:
    def certify(chunk):
        return ls.max_linear(cq.Chat[chunk], cq.dual_norms[chunk]) <= bhat[chunk]

    if threads <= 1 or rows.size <= PARALLEL_ROWS:
        return certify(rows)

    chunks = np.array_split(rows, threads)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return np.concatenate(list(executor.map(certify, chunks)))


def reduce(cq: CondensedQp, supports: TubeSupports, ls: Optional[LevelSetEllipse], x,
           offsets: Optional[np.ndarray] = None, threads: int = THREADS) -> ReducedIndexSets:
    """Reduced index sets at x.

    Without a level set only the tube certificates run.
    """
    if offsets is None:
        offsets = cq.offsets(x)

    bhat = offsets[:cq.state_rows]
    keep = supports.forward > bhat
    test_counts = {'forward': int(cq.state_rows), 'backward': 0, 'ellipse': 0}

    if supports.backward_applies(x):
        test_counts['backward'] = int(np.count_nonzero(keep[:supports.backward_rows]))
        keep &= ~supports.backward_redundant

    if ls is not None:
        rows = np.flatnonzero(keep)
        test_counts['ellipse'] = int(rows.size)
        if rows.size:
            keep[rows[_ellipse_redundant(cq, ls, rows, bhat, threads)]] = False

    retained = tuple(np.flatnonzero(keep[cq.step_slice(i)]) for i in range(1, cq.N + 1))
    reduced = ReducedIndexSets(retained, cq.state_rows, test_counts)
    logger.debug(f'Retained {sum(reduced.counts)} of {cq.state_rows} state rows, tests {test_counts}')
    return reduced


def assemble_reduced(cq: CondensedQp, idx: ReducedIndexSets, x, offsets: Optional[np.ndarray] = None) -> QpProblem:
    return cq.qp(x, rows=idx.stacked_rows(cq), offsets=offsets)
