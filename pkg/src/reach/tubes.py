"""Reachable tubes over the prediction horizon.

Forward boxes are the state-independent part R(0, U): the tube from a
state x is the same boxes shifted by the free response A^i x. Backward
sets are fixed; the last one is UNIVERSAL.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from common.loggers import logger
from lti.models import LtiSystem, PolyhedralSet
from lti.prediction import PredictionMatrices
from settings.solvers import PIVOT_THRESHOLD

from .exc import InvalidSet, SingularDynamics
from .sets import UNIVERSAL, BoxSet, UniversalSet, abs_bound


BackwardSet = Union[BoxSet, UniversalSet]


@dataclass(frozen=True, eq=False)
class ReachTubes:
    """Per step outer approximations, step i at position i - 1.

    With nonnegative set, the backward sets only bound nonnegative
    trajectories and are not used from states with negative entries.
    """

    forward: Tuple[BoxSet, ...]
    backward: Tuple[BackwardSet, ...]
    nonnegative: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'forward', tuple(self.forward))
        object.__setattr__(self, 'backward', tuple(self.backward))

        if not self.forward or len(self.forward) != len(self.backward):
            raise InvalidSet(f'Tubes need as many forward ({len(self.forward)}) '
                             f'as backward ({len(self.backward)}) sets')
        if self.backward[-1] is not UNIVERSAL:
            raise InvalidSet('The last backward set must be UNIVERSAL')

    @property
    def N(self) -> int:
        return len(self.forward)

    def backward_applies(self, x) -> bool:
        return not self.nonnegative or bool(np.all(np.asarray(x) >= 0))


def _interval_image(M: np.ndarray, box: BoxSet) -> Tuple[np.ndarray, np.ndarray]:
    """Center and half-widths of an axis-aligned box around {M y | y in box}."""
    return M @ box.q, abs_bound(box.transform_rows(M), box.l)


def forward_box_recursion(sys: LtiSystem, U: BoxSet, N: int, start: Optional[BoxSet] = None) -> List[BoxSet]:
    """Boxes containing every state reachable in 1..N steps from start with inputs in U.

    start defaults to the origin, which gives the state-independent tube.
    """
    if U.dim != sys.m:
        raise InvalidSet(f'Input box has dimension {U.dim}, expected {sys.m}')
    current = BoxSet.point(np.zeros(sys.n)) if start is None else start
    if current.dim != sys.n:
        raise InvalidSet(f'Start box has dimension {current.dim}, expected {sys.n}')

    input_center, input_half = _interval_image(sys.B, U)
    boxes = []
    for _ in range(N):
        center, half = _interval_image(sys.A, current)
        current = BoxSet(center + input_center, half + input_half)
        boxes.append(current)

    logger.debug(f'Forward box recursion over {N} steps')
    return boxes


def shift_tube(tubes: Union[ReachTubes, Sequence[BoxSet]], prediction: PredictionMatrices, x) -> List[BoxSet]:
    """Forward boxes of the tube from x: box i shifted by A^i x."""
    forward = tubes.forward if isinstance(tubes, ReachTubes) else tuple(tubes)
    z = prediction.free_response(x)
    return [box.shifted(prediction.block(z, i)) for i, box in enumerate(forward, start=1)]


def _inverse(A: np.ndarray) -> np.ndarray:
    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min(initial=np.inf) <= PIVOT_THRESHOLD * max(pivots.max(initial=0.0), 1.0):
        raise SingularDynamics('Backward box recursion needs an invertible A')
    return scipy.linalg.lu_solve((lu, piv), np.eye(A.shape[0]))


def backward_box_recursion(sys: LtiSystem, U: BoxSet, XT: PolyhedralSet, N: int) -> List[BackwardSet]:
    """Sets containing every state that can reach XT in N - i steps, i = 1..N.

    The preimage of a box under x -> A x + B u is bounded by interval
    arithmetic on x = A^-1 (s - B u). Entry N is UNIVERSAL.
    """
    if U.dim != sys.m or XT.dim != sys.n:
        raise InvalidSet('Input box or terminal set do not match the system')
    Ainv = _inverse(sys.A)

    lower, upper = XT.bounding_box()
    current = BoxSet.from_bounds(lower, upper)

    input_center, input_half = _interval_image(Ainv @ sys.B, U)
    sets: List[BackwardSet] = [UNIVERSAL]
    for _ in range(N - 1):
        center, half = _interval_image(Ainv, current)
        current = BoxSet(center - input_center, half + input_half)
        sets.append(current)

    logger.debug(f'Backward box recursion over {N} steps')
    return sets[::-1]
