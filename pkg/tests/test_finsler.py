import numpy as np
import pytest

from nutfinsler import finsler, oracle, riemann
from nutfinsler.exceptions import (ConfigurationError, DegenerateFlagError, DomainError,
                                   OutsideDomainError)
from nutfinsler.fields import ConstantField
from nutfinsler.finsler import RandersHandle, ScanConfig
from nutfinsler.navigation import NavigationParams, randers_F, randers_data

HEADLINE = RandersHandle.from_params(NavigationParams(1.0, 0.5, 0.5))
X0 = np.array([0.4, -0.3, 0.5, 0.2])
Y0 = np.array([0.3, 0.7, -0.2, 0.5])


def test_F_squared_jet_value_and_gradient():
    E = finsler.F_squared_jet(HEADLINE, X0, Y0, order=2)
    F = randers_F(randers_data(NavigationParams(), X0), Y0)
    assert E.value == pytest.approx(F * F, rel=1e-14)
    # Euler: y . dF^2/dy = 2 F^2
    assert E.gradient()[4:] @ Y0 == pytest.approx(2 * F * F, rel=1e-13)


def test_F_value_zero_vector():
    assert finsler.F_value(HEADLINE, X0, np.zeros(4)) == 0.0


def test_F_outside_domain():
    h = RandersHandle.from_params(NavigationParams(2.0, 2.0, 2.0))
    with pytest.raises(OutsideDomainError):
        finsler.F_squared_jet(h, [1, 0, 0, 0], Y0)


def test_fundamental_tensor_properties(rng):
    for _ in range(20):
        y = rng.normal(size=4)
        g = finsler.fundamental_tensor(HEADLINE, X0, y).g_y
        F = finsler.F_value(HEADLINE, X0, y)
        np.testing.assert_allclose(g, g.T, atol=1e-14)
        assert np.min(np.linalg.eigvalsh(g)) > 0
        assert y @ g @ y == pytest.approx(F * F, rel=1e-13)
        g2 = finsler.fundamental_tensor(HEADLINE, X0, 3.0 * y).g_y
        np.testing.assert_allclose(g2, g, rtol=1e-12, atol=1e-14)


def test_zero_pole_rejected():
    with pytest.raises(DomainError):
        finsler.spray(HEADLINE, X0, np.zeros(4))
    with pytest.raises(DomainError):
        finsler.point_curvature(HEADLINE, X0, np.zeros(4))


def test_riemannian_spray_is_half_christoffel(rng):
    spec = riemann.TaubNut(1.0)
    h = RandersHandle.riemannian(spec)
    for _ in range(10):
        x, y = rng.uniform(-1, 1, 4), rng.normal(size=4)
        expected = 0.5 * np.einsum("ijk,j,k->i", riemann.christoffel(spec, x).gamma, y, y)
        np.testing.assert_allclose(finsler.spray(h, x, y).G, expected, atol=1e-13)


def test_spray_homogeneous_degree_two():
    G1 = finsler.spray(HEADLINE, X0, Y0).G
    G2 = finsler.spray(HEADLINE, X0, 2.5 * Y0).G
    np.testing.assert_allclose(G2, 6.25 * G1, rtol=1e-12, atol=1e-15)


def test_point_spray_matches_float_spray():
    pc = finsler.point_curvature(HEADLINE, X0, Y0)
    np.testing.assert_allclose(pc.G, finsler.spray(HEADLINE, X0, Y0).G, rtol=1e-13, atol=1e-15)


def test_flat_has_zero_curvature():
    pc = finsler.point_curvature(RandersHandle.flat(), X0, Y0)
    assert not np.any(np.abs(pc.R) > 1e-15)
    assert pc.flag_curvature([1, 0, 0, 0]) == 0.0


def test_minkowski_randers_has_zero_curvature():
    # flat metric with constant wind gives a Minkowski Randers norm
    h = RandersHandle(riemann.Flat(), ConstantField((0.3, -0.2, 0.1, 0.4)))
    pc = finsler.point_curvature(h, X0, Y0)
    assert np.max(np.abs(pc.R)) < 1e-14
    assert np.max(np.abs(pc.G)) < 1e-15


def test_riemannian_reduction_matches_tensor(rng):
    spec = riemann.TaubNut(1.0)
    h = RandersHandle.riemannian(spec)
    for _ in range(5):
        x, y = rng.uniform(-1, 1, 4), rng.normal(size=4)
        Rt = riemann.curvature(spec, x).riemann
        expected = np.einsum("ijkl,j,l->ik", Rt, y, y)
        R = finsler.point_curvature(h, x, y).R
        np.testing.assert_allclose(R, expected, atol=1e-11 * max(1.0, np.max(np.abs(expected))))


def test_sphere_flag_curvature_one(sphere, rng):
    h = RandersHandle.riemannian(sphere)
    for _ in range(10):
        x, y, V = rng.uniform(-1, 1, 4), rng.normal(size=4), rng.normal(size=4)
        pc = finsler.point_curvature(h, x, y)
        assert pc.flag_curvature(V) == pytest.approx(1.0, abs=1e-11)
        lam, resid = pc.constant_flag_residual()
        assert lam == pytest.approx(1.0, abs=1e-11)
        assert resid < 1e-10 * np.linalg.norm(pc.R)


def test_flag_degenerate():
    pc = finsler.point_curvature(HEADLINE, X0, Y0)
    with pytest.raises(DegenerateFlagError):
        pc.flag_curvature(2.0 * Y0)


def test_flag_independent_of_scaling_and_pole_shift():
    pc = finsler.point_curvature(HEADLINE, X0, Y0)
    V = np.array([1.0, 0.2, -0.4, 0.3])
    K = pc.flag_curvature(V)
    assert pc.flag_curvature(-3.0 * V) == pytest.approx(K, rel=1e-12)
    assert pc.flag_curvature(V + 0.7 * Y0) == pytest.approx(K, rel=1e-10, abs=1e-12)


def test_endomorphism_annihilates_pole_and_is_self_adjoint():
    pc = finsler.point_curvature(HEADLINE, X0, Y0)
    scale = np.linalg.norm(pc.R)
    assert np.linalg.norm(pc.R @ Y0) < 1e-12 * max(1.0, scale)
    S = pc.g_y @ pc.R
    np.testing.assert_allclose(S, S.T, atol=1e-12 * max(1.0, scale))


def test_headline_ricci_vanishes(rng):
    for _ in range(10):
        x = rng.uniform(-0.6, 0.6, 4)
        y = rng.normal(size=4)
        pc = finsler.point_curvature(HEADLINE, x, y)
        assert abs(pc.ricci) / pc.F ** 2 < 1e-10


def test_endomorphism_vs_fd_oracle():
    pc = finsler.point_curvature(HEADLINE, X0, Y0)
    fd = oracle.endomorphism(lambda x, y: finsler.spray(HEADLINE, x, y).G, X0, Y0)
    assert np.max(np.abs(pc.R - fd)) < 1e-5 * np.max(np.abs(pc.R))


def test_scan_validation():
    with pytest.raises(ConfigurationError):
        finsler.scan_flags(HEADLINE, ScanConfig(samples=0))


def test_sample_flag_deterministic_and_in_domain():
    cfg = ScanConfig(samples=3, seed=7)
    a = finsler.sample_flag(HEADLINE, cfg, 2)
    b = finsler.sample_flag(HEADLINE, cfg, 2)
    np.testing.assert_array_equal(a.x, b.x)
    assert a.K == b.K
    assert HEADLINE.wind_norm_sq(a.x) <= 0.99
    assert np.linalg.norm(a.x) <= 2.0
    assert np.linalg.norm(a.y) == pytest.approx(1.0)


def test_scan_workers_match_serial():
    cfg = ScanConfig(samples=6, seed=3)
    serial = finsler.scan_flags(HEADLINE, cfg, 1)
    parallel = finsler.scan_flags(HEADLINE, cfg, 2)
    assert [s.K for s in serial] == [s.K for s in parallel]
    assert [s.index for s in parallel] == list(range(6))


def test_einstein_scan_small():
    rep = finsler.einstein_scan(HEADLINE, ScanConfig(samples=10, seed=1))
    assert rep.passed
    assert rep.statistics["samples"] == 10
    assert rep.statistics["flag_curvature_spread"] > 1e-3
