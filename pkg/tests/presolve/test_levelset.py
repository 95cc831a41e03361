import numpy as np
import pytest

from lti.models import LtiSystem, PolyhedralSet
from mpc.condense import condense
from mpc.models import MpcProblem
from presolve.exc import InfeasibleCandidate
from presolve.levelset import LevelSetEllipse, level_set


@pytest.fixture(scope='module')
def cq():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((3, 3))
    A *= 0.5 / np.abs(np.linalg.eigvals(A)).max()
    sys = LtiSystem(A, 0.5 * rng.standard_normal((3, 2)))
    box = PolyhedralSet.box(-5.0 * np.ones(3), 5.0 * np.ones(3))
    return condense(MpcProblem(sys, box, PolyhedralSet.box(-np.ones(2), np.ones(2)), box, 3))


def test_candidate_lies_on_the_boundary(cq):
    x = np.array([0.5, -0.5, 0.2])
    Utilde = np.full(cq.variables, 0.3)

    ls = level_set(cq, x, Utilde)

    assert ls.contains(Utilde)
    assert cq.cost(x, ls.q) <= cq.cost(x, Utilde)
    assert not ls.contains(ls.q + 1.01 * (Utilde - ls.q))


def test_level_set_bounds_cost(cq, rng):
    x = np.array([0.5, -0.5, 0.2])
    Utilde = np.full(cq.variables, 0.3)
    ls = level_set(cq, x, Utilde)
    bound = cq.cost(x, Utilde)

    for U in ls.as_ellipsoid().sample(rng, 200):
        assert cq.cost(x, U) <= bound + 1e-9 * max(abs(bound), 1.0)


def test_precomputed_dual_norms(cq):
    x = np.array([0.5, -0.5, 0.2])
    ls = level_set(cq, x, np.zeros(cq.variables))

    assert ls.max_linear(cq.Chat, cq.dual_norms) == pytest.approx(ls.max_linear(cq.Chat))
    assert ls.max_linear(cq.Chat) == pytest.approx(ls.as_ellipsoid().max_linear(cq.Chat))


def test_infeasible_candidate(cq):
    x = np.zeros(3)
    Utilde = np.zeros(cq.variables)
    Utilde[0] = 2.0

    with pytest.raises(InfeasibleCandidate) as error:
        level_set(cq, x, Utilde)

    assert cq.state_rows in error.value.rows
    assert error.value.exit_code == 2


def test_candidate_shape(cq):
    with pytest.raises(InfeasibleCandidate):
        level_set(cq, np.zeros(3), np.zeros(cq.variables + 1))


def test_degenerate_level_set(cq):
    x = np.array([0.1, 0.0, 0.0])
    minimizer = level_set(cq, x, np.zeros(cq.variables)).q

    ls = level_set(cq, x, minimizer)

    assert ls.degenerate
    assert ls.max_linear(cq.Chat) == pytest.approx(cq.Chat @ minimizer)
    with pytest.raises(ValueError):
        ls.L


def test_shape_matrix():
    ls = LevelSetEllipse(2.0 * np.eye(2), np.zeros(2), 4.0)

    assert ls.L == pytest.approx(0.5 * np.eye(2))
    assert ls.contains([2.0, 0.0])
    assert not ls.contains([2.1, 0.0])
