"""Receding horizon controller with constraint pre-solve.

Each step shifts the previous optimal sequence into a feasible candidate,
builds the cost level set through it, drops every row the tubes or the
level set certify redundant and solves what is left. The first step has no
candidate and runs on the tube certificates alone.
"""
from enum import Enum
from time import perf_counter
from typing import Optional, Tuple, Union

import numpy as np

from common.loggers import logger
from mpc.law import infeasibility_report, solve_full
from presolve.levelset import level_set
from presolve.reduction import assemble_reduced, reduce
from settings.app import THREADS
from settings.solvers import FEASIBILITY_TOL, TOL_KKT
from solvers.exc import NumericalFailure
from solvers.qp import QpSolution, QpStatus, solve_qp

from .exc import InvalidMode, SoundnessViolation
from .models import CampcState, ControlSetup, SimulationTrace, Timings


class ControllerMode(str, Enum):
    CAMPC = 'campc'
    FULL = 'full'


def warm_start(Uprev, Kaux, xN) -> np.ndarray:
    """[u_1 .. u_{N-1}, Kaux x_N] from the previous optimal sequence."""
    Kaux = np.atleast_2d(np.asarray(Kaux, dtype=float))
    m = Kaux.shape[0]
    return np.concatenate([np.asarray(Uprev, dtype=float)[m:], Kaux @ np.asarray(xN, dtype=float)])


def _check_solution(solution: QpSolution, cq, x, offsets):
    if solution.status is QpStatus.INFEASIBLE:
        raise infeasibility_report(cq, x, offsets)
    if solution.status is QpStatus.MAX_ITER:
        raise NumericalFailure(f'QP did not converge in {solution.iterations} iterations')


class Controller:

    def __init__(self, setup: ControlSetup, mode: Union[ControllerMode, str] = ControllerMode.CAMPC,
                 oracle: bool = False, tol_kkt: float = TOL_KKT, threads: int = THREADS):
        try:
            self.mode = ControllerMode(mode)
        except ValueError as e:
            raise InvalidMode(f'Unknown controller mode {mode!r}') from e
        if self.mode is ControllerMode.CAMPC and setup.supports is None:
            raise InvalidMode('The campc mode needs tube supports')

        self.setup = setup
        self.oracle = oracle
        self.tol_kkt = tol_kkt
        self.threads = threads
        self.reset()

    def reset(self):
        self.k = 0
        self._Uprev: Optional[np.ndarray] = None
        self._terminal: Optional[np.ndarray] = None

    def step(self, x) -> Tuple[np.ndarray, CampcState]:
        cq = self.setup.cq
        x = np.asarray(x, dtype=float)

        start = perf_counter()
        z = cq.free_response(x)
        offsets = cq.offsets(x, z)
        Utilde = None
        if self._Uprev is not None:
            Utilde = warm_start(self._Uprev, cq.problem.Kaux, self._terminal)

        presolve = 0.0
        if self.mode is ControllerMode.FULL:
            qp, retained, test_counts, fraction = cq.qp(x, offsets=offsets), (), {}, 1.0
        else:
            tick = perf_counter()
            ls = None if Utilde is None else level_set(cq, x, Utilde, offsets)
            idx = reduce(cq, self.setup.supports, ls, x, offsets, self.threads)
            qp = assemble_reduced(cq, idx, x, offsets)
            presolve = perf_counter() - tick
            retained, test_counts, fraction = idx.counts, idx.test_counts, idx.retained_fraction

        tick = perf_counter()
        solution = solve_qp(qp, warm=Utilde, tol_kkt=self.tol_kkt)
        qp_time = perf_counter() - tick
        total = perf_counter() - start

        _check_solution(solution, cq, x, offsets)
        Ustar = solution.ustar

        if self.mode is ControllerMode.CAMPC:
            violation = float(np.max(cq.Chat @ Ustar - offsets, initial=0.0))
            if violation > FEASIBILITY_TOL:
                raise SoundnessViolation(f'Reduced solution violates a removed row by {violation!r} at step {self.k}')

        delta = None
        if self.oracle:
            full = solve_full(cq, x, warm=Utilde, offsets=offsets, tol_kkt=self.tol_kkt)
            _check_solution(full, cq, x, offsets)
            delta = float(np.abs(Ustar - full.ustar).max())

        record = CampcState(self.k, x, self._Uprev, Ustar, Timings(presolve, qp_time, total),
                            fraction, retained, dict(test_counts), delta)
        logger.debug(f'Step {self.k}: retained {fraction:.4f}, total {total:.6f} s')

        self._Uprev = Ustar
        self._terminal = cq.predicted_state(z, Ustar, cq.N)
        self.k += 1
        return Ustar[:cq.problem.m].copy(), record


def run(setup: ControlSetup, steps: int, oracle: bool = False,
        mode: Union[ControllerMode, str] = ControllerMode.CAMPC,
        tol_kkt: float = TOL_KKT, threads: int = THREADS) -> SimulationTrace:
    """Closed loop over the given number of steps from setup.x0."""
    controller = Controller(setup, mode=mode, oracle=oracle, tol_kkt=tol_kkt, threads=threads)
    sys = setup.cq.problem.sys

    trace = SimulationTrace()
    x = np.array(setup.x0, dtype=float)
    for _ in range(steps):
        u, record = controller.step(x)
        trace.append(x, u, record)
        x = sys.simulate_step(x, u)
    trace.final_state = x

    if trace.steps:
        logger.info(f'Ran {trace.steps} {controller.mode.value} steps on {setup.name or "scenario"}, '
                    f'max total time {trace.timings("total").max():.6f} s')
    return trace
