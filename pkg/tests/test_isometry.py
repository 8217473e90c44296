import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nutfinsler import isometry
from nutfinsler.navigation import NavigationParams, wind

angles = st.floats(-10, 10)
rates = st.floats(0.01, 3)
points = st.lists(st.floats(-3, 3), min_size=4, max_size=4).map(np.array)


def test_rotation_identity_at_zero():
    np.testing.assert_array_equal(isometry.rotation(1.3, 0.2, 0.0).matrix, np.eye(4))


def test_quarter_turn():
    out = isometry.rotation(1, 1, math.pi / 2).matrix @ [1, 0, 0, 0]
    np.testing.assert_allclose(out, [0, 1, 0, 0], atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(rates, rates, angles)
def test_rotation_orthogonal_block_diagonal(m, n, theta):
    A = isometry.rotation(m, n, theta).matrix
    np.testing.assert_allclose(A.T @ A, np.eye(4), atol=1e-14)
    assert np.linalg.det(A) == pytest.approx(1.0, abs=1e-14)
    assert not np.any(A[:2, 2:]) and not np.any(A[2:, :2])


def test_isometry_trivial_cases(rng):
    x = rng.normal(size=4)
    assert isometry.isometry_residual(1.0, 2.0, 3.0, 0.0, x) == 0.0
    assert isometry.isometry_residual(0.0, 2.0, 3.0, 1.1, x) < 1e-15


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([0.0, 0.5, 1.0, 2.0]), rates, rates, angles, points)
def test_isometry_random(a, m, n, theta, x):
    assert isometry.isometry_residual(a, m, n, theta, x) < 1e-12


def test_equivariance_trivial():
    assert isometry.h_equivariance_residual(0.4, 0.9, 0.0, [1, 2, 3, 4]) == 0.0
    assert isometry.h_equivariance_residual(0.4, 0.9, 1.0, np.zeros(4)) == 0.0


@settings(max_examples=100, deadline=None)
@given(rates, rates, angles, points)
def test_equivariance_random(m, n, theta, x):
    assert isometry.h_equivariance_residual(m, n, theta, x) < 1e-13


def test_generator_values():
    assert not np.any(isometry.generator(2, 3, np.zeros(4)))
    np.testing.assert_allclose(isometry.generator(2, 3, [1, 0, 0, 0]), [0, 2, 0, 0], atol=1e-9)


def test_generator_matches_wind(rng):
    for _ in range(100):
        m, n = rng.uniform(0.05, 2, 2)
        p = rng.uniform(-2, 2, 4)
        np.testing.assert_allclose(isometry.generator(m, n, p), wind(NavigationParams(1, m, n), p),
                                   atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(rates, rates, angles, angles, points)
def test_group_law(m, n, t1, t2, x):
    scale = max(1.0, float(np.linalg.norm(x)))
    assert isometry.group_law_residual(m, n, t1, t2, x) < 1e-13 * scale
    assert isometry.group_law_residual(m, n, t1, 0.0, x) == 0.0
    assert isometry.group_law_residual(m, n, t1, -t1, x) < 1e-13 * scale
    assert isometry.norm_residual(m, n, t1, x) < 1e-13 * scale


def test_flowmap_callable():
    f = isometry.FlowMap(1.0, 2.0)
    np.testing.assert_allclose(f([0, 0, 1, 0], math.pi / 4), [0, 0, 0, 1], atol=1e-15)
