import itertools

import numpy as np
import pytest

from reach.exc import InvalidSet
from reach.sets import UNIVERSAL, BoxSet, EllipsoidSet, abs_bound


def vertices(box):
    corners = np.array(list(itertools.product((-1.0, 1.0), repeat=box.dim))) * box.l
    if not box.axis_aligned:
        corners = np.linalg.solve(box.P, corners.T).T
    return box.q + corners


def test_from_bounds():
    box = BoxSet.from_bounds([0.0, -1.0], [2.0, 3.0])

    assert box.q == pytest.approx([1.0, 1.0])
    assert box.l == pytest.approx([1.0, 2.0])
    lower, upper = box.bounds()
    assert lower == pytest.approx([0.0, -1.0])
    assert upper == pytest.approx([2.0, 3.0])


def test_from_bounds_with_infinite_sides():
    box = BoxSet.from_bounds([-np.inf, 0.0], [4.0, 1.0])

    assert np.isfinite(box.q).all()
    assert np.isinf(box.l[0])
    assert box.max_linear([0.0, 1.0]) == pytest.approx(1.0)
    assert box.max_linear([1.0, 0.0]) == np.inf


def test_identity_transform_is_axis_aligned():
    assert BoxSet(np.zeros(2), np.ones(2), np.eye(2)).axis_aligned


def test_axis_aligned_support_matches_vertices(rng):
    box = BoxSet(rng.standard_normal(3), rng.uniform(0.1, 1.0, 3))
    C = rng.standard_normal((10, 3))

    expected = (C @ vertices(box).T).max(axis=1)

    assert box.max_linear(C) == pytest.approx(expected)


def test_rotated_support_matches_vertices(rng):
    P = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
    box = BoxSet(rng.standard_normal(3), rng.uniform(0.1, 1.0, 3), P)
    C = rng.standard_normal((10, 3))

    expected = (C @ vertices(box).T).max(axis=1)

    assert not box.axis_aligned
    assert box.max_linear(C) == pytest.approx(expected)
    assert isinstance(box.max_linear(C[0]), float)


def test_samples_are_contained(rng):
    P = rng.standard_normal((4, 4)) + 4.0 * np.eye(4)
    box = BoxSet(rng.standard_normal(4), rng.uniform(0.1, 1.0, 4), P)

    assert all(box.contains(x) for x in box.sample(rng, 200))
    assert not box.contains(box.q + 10.0 * (vertices(box)[0] - box.q))


def test_scaled_and_shifted():
    box = BoxSet(np.zeros(2), np.ones(2))

    assert box.scaled(2.0).l == pytest.approx([2.0, 2.0])
    assert box.shifted([1.0, -1.0]).q == pytest.approx([1.0, -1.0])


@pytest.mark.parametrize('kwargs', [
    {'q': [0.0, 0.0], 'l': [1.0, -1.0]},
    {'q': [0.0, np.inf], 'l': [1.0, 1.0]},
    {'q': [0.0, 0.0], 'l': [1.0, 1.0], 'P': [[1.0, 1.0], [1.0, 1.0]]},
    {'q': [0.0, 0.0], 'l': [1.0, 1.0], 'P': [[1.0, 0.0, 0.0]]},
])
def test_invalid_boxes(kwargs):
    with pytest.raises(InvalidSet):
        BoxSet(**kwargs)


def test_inverted_bounds_rejected():
    with pytest.raises(InvalidSet):
        BoxSet.from_bounds([1.0], [0.0])


def test_rotated_box_has_no_coordinate_bounds():
    with pytest.raises(InvalidSet):
        BoxSet(np.zeros(2), np.ones(2), [[1.0, 1.0], [0.0, 1.0]]).bounds()


def test_abs_bound_ignores_zero_coefficients_on_unbounded_axes():
    l = np.array([1.0, np.inf])

    assert abs_bound(np.array([[2.0, 0.0], [0.0, 1.0]]), l) == pytest.approx([2.0, np.inf])


def test_ellipsoid_support_is_attained(rng):
    L = np.tril(rng.standard_normal((3, 3))) + 3.0 * np.eye(3)
    ellipsoid = EllipsoidSet(L, rng.standard_normal(3))
    c = rng.standard_normal(3)

    y = np.linalg.solve(L, c)
    maximizer = ellipsoid.q + np.linalg.solve(L.T, y / np.linalg.norm(y))

    assert ellipsoid.contains(maximizer)
    assert ellipsoid.max_linear(c) == pytest.approx(c @ maximizer)
    assert (ellipsoid.sample(rng, 500) @ c <= ellipsoid.max_linear(c) + 1e-12).all()


def test_ellipsoid_samples_are_contained(rng):
    ellipsoid = EllipsoidSet(np.diag([1.0, 2.0, 4.0]), np.ones(3))

    assert all(ellipsoid.contains(x) for x in ellipsoid.sample(rng, 200))
    assert not ellipsoid.contains(np.ones(3) + np.array([1.5, 0.0, 0.0]))


def test_singular_ellipsoid_rejected():
    with pytest.raises(InvalidSet):
        EllipsoidSet(np.zeros((2, 2)), np.zeros(2))


def test_universal_set():
    assert UNIVERSAL.max_linear([1.0, 2.0]) == np.inf
    assert np.isinf(UNIVERSAL.max_linear(np.eye(3))).all()
    assert UNIVERSAL.contains(np.full(3, 1e300))
