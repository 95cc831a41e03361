"""Hyperthermia scenario models.

Contains the heat scenario: the discretized plant, its temperature limits
and the offline designed terminal set and references.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from campc.models import ControlSetup
from common.loggers import logger
from lti.models import LtiSystem, PolyhedralSet
from mpc.condense import CondensedQp, condense
from mpc.models import CheckResult, MpcProblem
from presolve.reduction import TubeSupports
from settings.solvers import FEASIBILITY_TOL, MEMBERSHIP_TOL

from .design import case_tubes, references, terminal_set
from .discretization import DEFAULT_ACTUATORS, ActuatorProfile, discretize, grid
from .exc import ScenarioRejected


DT = 1.0
ALPHA = 2.5e-4
BETA = 1e-2
GAMMA = 2.5e-3

HEALTHY_LIMIT = 5.0
TUMOR_LIMIT = 7.0
TUMOR_INTERVAL = (0.6, 0.9)

HORIZON = 10
STEPS = 120


@dataclass(frozen=True, eq=False)
class HeatScenario:
    """1D hyperthermia treatment with temperatures above body temperature."""

    n: int
    dt: float
    alpha: float
    beta: float
    gamma: float
    tumor: Tuple[float, float]
    Tmax: np.ndarray
    Tterminal: np.ndarray
    actuators: Tuple[ActuatorProfile, ...]
    xref: np.ndarray
    uref: np.ndarray
    sys: LtiSystem
    N: int = HORIZON
    weights: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    tol_kkt: Optional[float] = None
    steps: int = STEPS
    oracle: bool = False
    seed: int = 0
    name: str = 'hyperthermia'
    x0: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        if self.x0 is None:
            object.__setattr__(self, 'x0', np.zeros(self.n))

    @classmethod
    def create_from(cls, data: dict) -> 'HeatScenario':
        """Build the scenario from a validated scenario document."""
        system = data.get('system', {})
        constraints = data.get('constraints', {})
        mpc = data.get('mpc', {})
        run = data.get('run', {})

        n = int(system['n'])
        dt = float(system.get('dt', DT))
        alpha = float(system.get('alpha', ALPHA))
        beta = float(system.get('beta', BETA))
        gamma = float(system.get('gamma', GAMMA))

        actuators = data.get('actuators')
        actuators = tuple(ActuatorProfile.create_from(a) for a in actuators) if actuators else DEFAULT_ACTUATORS

        tumor = tuple(float(v) for v in constraints.get('tumor_interval', TUMOR_INTERVAL))
        if not 0.0 <= tumor[0] <= tumor[1] <= 1.0:
            raise ScenarioRejected(f'Tumor interval {tumor} is not inside [0, 1]')
        healthy_limit = float(constraints.get('healthy_limit', HEALTHY_LIMIT))
        tumor_limit = float(constraints.get('tumor_limit', TUMOR_LIMIT))

        r = grid(n)
        in_tumor = (r >= tumor[0]) & (r <= tumor[1])
        Tmax = np.where(in_tumor, tumor_limit, healthy_limit)

        sys = discretize(n, dt, alpha, beta, gamma, actuators)
        Tterminal = terminal_set(sys, Tmax)
        xref, uref = references(sys, Tmax, in_tumor)

        weights = mpc.get('weights', {})
        scenario = cls(
            n=n, dt=dt, alpha=alpha, beta=beta, gamma=gamma, tumor=tumor,
            Tmax=Tmax, Tterminal=Tterminal, actuators=actuators,
            xref=xref, uref=uref, sys=sys,
            N=int(mpc.get('N', HORIZON)),
            weights=(float(weights.get('q', 1.0)), float(weights.get('r', 1.0)), float(weights.get('p', 1.0))),
            tol_kkt=mpc.get('tol_kkt'),
            steps=int(run.get('steps', STEPS)),
            oracle=bool(run.get('oracle', False)),
            seed=int(run.get('seed', 0)),
            name=data.get('name', 'hyperthermia'),
        )
        logger.info(f'Created scenario {scenario.name} with n={n}')
        return scenario

    @property
    def r(self) -> np.ndarray:
        return grid(self.n)

    @property
    def tumor_mask(self) -> np.ndarray:
        r = self.r
        return (r >= self.tumor[0]) & (r <= self.tumor[1])

    def mpc_problem(self) -> MpcProblem:
        q, r, p = self.weights
        n, m = self.sys.n, self.sys.m
        return MpcProblem(
            sys=self.sys,
            Xset=PolyhedralSet.upper_bounds(self.Tmax),
            Uset=PolyhedralSet.box(np.zeros(m), np.ones(m)),
            XT=PolyhedralSet.upper_bounds(self.Tterminal),
            N=self.N,
            Q=q * np.eye(n),
            R=r * np.eye(m),
            P=p * np.eye(n),
            xref=self.xref,
            uref=self.uref,
        )

    def setup(self, cq: Optional[CondensedQp] = None) -> ControlSetup:
        """Condensed problem and tube supports, the offline part of a run."""
        if cq is None:
            cq = condense(self.mpc_problem())
        supports = TubeSupports.from_tubes(cq, case_tubes(self.sys, self.Tterminal, self.N))
        return ControlSetup(cq, supports, self.x0, name=f'{self.name} n={self.n}')

    def checks(self, seed: Optional[int] = None, samples: int = 1000) -> List[CheckResult]:
        rng = np.random.default_rng(self.seed if seed is None else seed)
        A, B, T = self.sys.A, self.sys.B, self.Tterminal

        results = [CheckResult('positivity', self.sys.is_positive())]

        ordered = bool(np.all(self.Tmax >= T - MEMBERSHIP_TOL) and np.all(T >= 0))
        results.append(CheckResult('limits_ordering', ordered))

        excess = float(np.max(A @ T - T, initial=0.0))
        results.append(CheckResult('terminal_invariance', excess <= MEMBERSHIP_TOL, f'max excess {excess!r}'))

        points = rng.uniform(size=(samples, self.n)) * T
        sampled = float(np.max(points @ A.T - T, initial=0.0))
        results.append(CheckResult('terminal_sampled_invariance', sampled <= MEMBERSHIP_TOL, f'max excess {sampled!r}'))

        residual = float(np.abs(self.xref - A @ self.xref - B @ self.uref).max())
        results.append(CheckResult('reference_equilibrium', residual <= 1e-9, f'residual {residual!r}'))

        bounded = bool(np.all(self.uref >= 0) and np.all(self.uref <= 1)
                       and np.all(self.xref <= self.Tmax + FEASIBILITY_TOL))
        results.append(CheckResult('reference_bounds', bounded))

        results.append(self._forward_tube_check(rng, samples))
        return results

    def _forward_tube_check(self, rng: np.random.Generator, samples: int) -> CheckResult:
        """Random input sequences from x0 = 0 stay in [0, sum_{k<i} A^k B 1]."""
        A, B = self.sys.A, self.sys.B
        x = np.zeros((samples, self.n))
        upper = np.zeros(self.n)
        total = B.sum(axis=1)
        for i in range(1, self.N + 1):
            x = x @ A.T + rng.uniform(size=(samples, self.sys.m)) @ B.T
            upper = A @ upper + total
            if (x < -MEMBERSHIP_TOL).any() or (x > upper + MEMBERSHIP_TOL).any():
                return CheckResult('forward_tube_soundness', False, f'step {i}')
        return CheckResult('forward_tube_soundness', True)

    def dump(self) -> dict:
        return {
            'name': self.name,
            'n': self.n,
            'dt': self.dt,
            'alpha': self.alpha,
            'beta': self.beta,
            'gamma': self.gamma,
            'tumor': list(self.tumor),
            'N': self.N,
            'uref': self.uref.tolist(),
            'actuators': [actuator.dump() for actuator in self.actuators],
        }
