import os
import sys
from typing import NamedTuple

import numpy as np
import pytest


SRC = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src')
if SRC not in sys.path:
    sys.path.insert(0, SRC)

# slack below which a row counts as active at an optimum
ACTIVE_TOL = 1e-6


def pytest_collection_modifyitems(config, items):
    if os.getenv('CAMPC_BENCHMARK') == '1':
        return

    skip = pytest.mark.skip(reason='set CAMPC_BENCHMARK=1 to run benchmarks')
    for item in items:
        if 'benchmark' in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope='session')
def small_scenario():
    from hyperthermia.models import HeatScenario

    return HeatScenario.create_from({'system': {'n': 30}, 'run': {'steps': 60}})


@pytest.fixture(scope='session')
def small_setup(small_scenario):
    return small_scenario.setup()


class ClosedLoopPoint(NamedTuple):
    """State of a full MPC closed loop, the shifted candidate there and the optimum."""

    k: int
    x: np.ndarray
    Utilde: np.ndarray
    Ustar: np.ndarray


@pytest.fixture(scope='session')
def closed_loop_points(small_setup):
    from campc.controller import run, warm_start

    cq = small_setup.cq
    trace = run(small_setup, 60, mode='full')

    points = []
    for previous, record in zip(trace.records, trace.records[1:]):
        xN = cq.predicted_state(cq.free_response(previous.x), previous.Ustar, cq.N)
        Utilde = warm_start(previous.Ustar, cq.problem.Kaux, xN)
        points.append(ClosedLoopPoint(record.k, record.x, Utilde, record.Ustar))
    return points


@pytest.fixture(scope='session')
def binding_points(small_setup, closed_loop_points):
    """Closed-loop points whose optimum has a state or terminal row at its bound."""
    cq = small_setup.cq
    return [point for point in closed_loop_points
            if state_slack(cq, point.x, point.Ustar).min() <= ACTIVE_TOL]


def state_slack(cq, x, U) -> np.ndarray:
    rows = slice(0, cq.state_rows)
    return cq.offsets(x)[rows] - cq.Chat[rows] @ U
