from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from mpc.condense import CondensedQp
from presolve.reduction import TubeSupports


class Timings(NamedTuple):
    """Seconds spent in one controller step."""

    presolve: float = 0.0
    qp_solve: float = 0.0
    total: float = 0.0


@dataclass(frozen=True, eq=False)
class CampcState:
    """Record of controller step k."""

    k: int
    x: np.ndarray
    Uprev: Optional[np.ndarray]
    Ustar: np.ndarray
    timings: Timings
    retained_fraction: float
    retained: Tuple[int, ...] = ()
    test_counts: Dict[str, int] = field(default_factory=dict)
    input_delta: Optional[float] = None


@dataclass(frozen=True, eq=False)
class ControlSetup:
    """Everything the controller needs for one scenario, built offline."""

    cq: CondensedQp
    supports: Optional[TubeSupports]
    x0: np.ndarray
    name: str = ''


@dataclass
class SimulationTrace:
    """Closed-loop run: states x_0..x_{T-1} with the inputs applied at them."""

    states: List[np.ndarray] = field(default_factory=list)
    inputs: List[np.ndarray] = field(default_factory=list)
    records: List[CampcState] = field(default_factory=list)
    final_state: Optional[np.ndarray] = None

    @property
    def steps(self) -> int:
        return len(self.records)

    @property
    def deltas(self) -> List[Optional[float]]:
        return [record.input_delta for record in self.records]

    @property
    def max_input_delta(self) -> Optional[float]:
        deltas = [delta for delta in self.deltas if delta is not None]
        return max(deltas) if deltas else None

    @property
    def retained_fractions(self) -> np.ndarray:
        return np.array([record.retained_fraction for record in self.records])

    def timings(self, phase: str) -> np.ndarray:
        return np.array([getattr(record.timings, phase) for record in self.records])

    def append(self, x: np.ndarray, u: np.ndarray, record: CampcState):
        self.states.append(x)
        self.inputs.append(u)
        self.records.append(record)
