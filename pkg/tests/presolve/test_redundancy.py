import numpy as np
import pytest

from presolve import redundancy
from presolve.levelset import LevelSetEllipse
from reach.sets import UNIVERSAL, BoxSet, EllipsoidSet
from solvers.lp import LpProblem, LpStatus, solve_lp


@pytest.fixture
def box():
    return BoxSet.from_bounds([0.0, -1.0], [1.0, 1.0])


def test_box_certificate(box):
    assert redundancy.test_box([1.0, 1.0], 2.0, box)
    assert redundancy.test_box([1.0, 1.0], 2.5, box)
    assert not redundancy.test_box([1.0, 1.0], 1.5, box)
    assert not redundancy.test_box([1.0, 0.0], -0.5, box)


def test_box_certificate_on_unbounded_box():
    box = BoxSet.from_bounds([-np.inf, 0.0], [0.0, 1.0])

    assert redundancy.test_box([0.0, 1.0], 1.0, box)
    assert not redundancy.test_box([1.0, 1.0], 100.0, box)


def test_ellipse_certificate():
    ellipsoid = EllipsoidSet(np.eye(2), np.zeros(2))

    assert redundancy.test_ellipse([3.0, 4.0], 5.0, ellipsoid)
    assert not redundancy.test_ellipse([3.0, 4.0], 4.9, ellipsoid)


def test_level_set_certificate():
    G = np.diag([2.0, 1.0])
    ls = LevelSetEllipse(G, np.array([1.0, 0.0]), 2.0)

    # max of u_1 over |G' (U - q)| <= 2 is 1 + 2 / 2
    assert redundancy.test_ellipse([1.0, 0.0], 2.0, ls)
    assert not redundancy.test_ellipse([1.0, 0.0], 1.99, ls)


def test_degenerate_level_set_checks_the_center():
    ls = LevelSetEllipse(np.eye(2), np.array([1.0, 2.0]), 0.0)

    assert ls.degenerate
    assert redundancy.test_ellipse([1.0, 1.0], 3.0, ls)
    assert not redundancy.test_ellipse([1.0, 1.0], 2.9, ls)


def test_universal_set_certifies_nothing():
    assert not redundancy.test_box([1.0, 0.0], 1e300, UNIVERSAL)


def test_redundant_rows_mask(box):
    C = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    b = np.array([1.0, 0.5, 3.0])

    assert redundancy.redundant_rows(C, b, box).tolist() == [True, False, True]


def test_certified_rows_hold_on_samples(rng):
    P = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
    box = BoxSet(rng.standard_normal(3), rng.uniform(0.1, 1.0, 3), P)
    C = rng.standard_normal((200, 3))
    b = rng.uniform(0.0, 3.0, 200)

    mask = redundancy.redundant_rows(C, b, box)
    samples = box.sample(rng, 500)

    assert mask.any()
    assert (samples @ C[mask].T <= b[mask] + 1e-12).all()


def box_rows(box):
    """{x | -l <= P (x - q) <= l} as stacked inequality rows."""
    P = np.eye(box.dim) if box.P is None else box.P
    return np.vstack([P, -P]), np.concatenate([box.l + P @ box.q, box.l - P @ box.q])


def random_gap(rng):
    return rng.choice([-1.0, 1.0]) * rng.uniform(1e-6, 1.0)


def test_box_certificate_agrees_with_lp(rng):
    for _ in range(1000):
        dim = int(rng.integers(1, 6))
        P = None
        if rng.random() < 0.5:
            rotation, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
            P = rotation * rng.uniform(0.5, 2.0, dim)
        box = BoxSet(rng.standard_normal(dim), rng.uniform(0.01, 2.0, dim), P)
        c = rng.standard_normal(dim)

        solution = solve_lp(LpProblem(c, *box_rows(box)))
        gap = random_gap(rng)

        assert solution.status is LpStatus.OPTIMAL
        assert box.max_linear(c) == pytest.approx(solution.objective, rel=1e-7, abs=1e-7)
        assert redundancy.test_box(c, solution.objective + gap, box) is bool(gap > 0)


def test_ellipse_certificate_agrees_with_the_maximizer(rng):
    for _ in range(1000):
        dim = int(rng.integers(1, 6))
        M = rng.standard_normal((dim, dim))
        shape = M @ M.T + 0.5 * np.eye(dim)
        ellipsoid = EllipsoidSet(np.linalg.cholesky(shape), rng.standard_normal(dim))
        c = rng.standard_normal(dim)

        # maximizer of c x over (x - q)' shape (x - q) <= 1
        direction = np.linalg.solve(shape, c)
        top = ellipsoid.q + direction / np.sqrt(c @ direction)
        gap = random_gap(rng)

        assert ellipsoid.contains(top, tol=1e-9)
        assert redundancy.test_ellipse(c, c @ top + gap, ellipsoid) is bool(gap > 0)


def test_level_set_certificate_agrees_with_the_maximizer(rng):
    for _ in range(1000):
        dim = int(rng.integers(1, 6))
        M = rng.standard_normal((dim, dim))
        H = M @ M.T + 0.5 * np.eye(dim)
        ls = LevelSetEllipse(np.linalg.cholesky(H), rng.standard_normal(dim), rng.uniform(0.1, 3.0))
        c = rng.standard_normal(dim)

        direction = np.linalg.solve(H, c)
        top = ls.q + ls.rho * direction / np.sqrt(c @ direction)
        gap = random_gap(rng)

        assert ls.contains(top, tol=1e-9)
        assert redundancy.test_ellipse(c, c @ top + gap, ls) is bool(gap > 0)
