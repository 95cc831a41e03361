from dataclasses import replace

import numpy as np
import pytest

from campc.controller import run
from hyperthermia.exc import ScenarioRejected
from hyperthermia.models import HORIZON, HeatScenario
from settings.solvers import TOL_KKT


def test_default_scenario_passes_every_check(small_scenario):
    results = small_scenario.checks()

    assert [result.name for result in results] == [
        'positivity',
        'limits_ordering',
        'terminal_invariance',
        'terminal_sampled_invariance',
        'reference_equilibrium',
        'reference_bounds',
        'forward_tube_soundness',
    ]
    assert all(result.passed for result in results), [r for r in results if not r.passed]


def test_terminal_set_at_the_limits_is_not_invariant(small_scenario):
    tampered = replace(small_scenario, Tterminal=small_scenario.Tmax)
    results = {result.name: result for result in tampered.checks()}

    assert results['limits_ordering'].passed
    assert not results['terminal_invariance'].passed


def test_terminal_ingredients_pass_the_lp_checks(small_scenario):
    assert all(result.passed for result in small_scenario.mpc_problem().verify())


def test_defaults(small_scenario):
    assert small_scenario.N == HORIZON
    assert small_scenario.steps == 60
    assert small_scenario.x0.tolist() == [0.0] * 30
    assert small_scenario.Tmax[small_scenario.tumor_mask].tolist() == [7.0] * int(small_scenario.tumor_mask.sum())
    assert (small_scenario.Tmax[~small_scenario.tumor_mask] == 5.0).all()


def test_mpc_problem(small_scenario):
    problem = small_scenario.mpc_problem()

    assert problem.Xset.rows == 30
    assert problem.XT.rows == 30
    assert problem.Uset.rows == 2 * problem.m
    assert problem.Uset.contains(np.ones(problem.m))
    assert not problem.Uset.contains(-np.ones(problem.m))


def test_weights():
    scenario = HeatScenario.create_from({'system': {'n': 10}, 'mpc': {'N': 4, 'weights': {'r': 0.5}}})
    problem = scenario.mpc_problem()

    assert problem.N == 4
    assert problem.R == pytest.approx(0.5 * np.eye(problem.m))
    assert problem.P == pytest.approx(np.eye(10))


@pytest.mark.parametrize('interval', [(-0.1, 0.5), (0.8, 0.6), (0.5, 1.5)])
def test_tumor_interval_must_lie_in_the_domain(interval):
    with pytest.raises(ScenarioRejected):
        HeatScenario.create_from({'system': {'n': 10}, 'constraints': {'tumor_interval': list(interval)}})


def test_dump(small_scenario):
    data = small_scenario.dump()

    assert data['n'] == 30
    assert data['N'] == HORIZON
    assert data['tumor'] == [0.6, 0.9]
    assert len(data['actuators']) == len(data['uref']) == 2


def test_campc_matches_full_mpc_at_larger_grid():
    scenario = HeatScenario.create_from({'system': {'n': 100}, 'run': {'steps': 30}})

    trace = run(scenario.setup(), scenario.steps, oracle=True)

    assert trace.max_input_delta <= 10 * TOL_KKT
    assert trace.retained_fractions.max() > 0.0
    assert (np.array(trace.states) <= scenario.Tmax + 1e-7).all()


def test_references_sit_inside_the_input_range(small_scenario):
    # full power on either actuator overheats, so the reference is limited by the temperatures
    assert (small_scenario.uref < 1.0).all()
    assert np.isclose(small_scenario.xref, small_scenario.Tmax, atol=1e-6).any()
