import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nutfinsler import navigation as nav
from nutfinsler.exceptions import ConfigurationError, OutsideDomainError
from nutfinsler.linalg import cholesky
from nutfinsler.navigation import NavigationParams
from nutfinsler.riemann import metric_matrix


def _domain_point(rng, params, radius=2.0, margin=0.99):
    while True:
        x = rng.uniform(-radius, radius, 4)
        if nav.wind_norm_sq(params, x) <= margin:
            return x


def _params(rng):
    return NavigationParams(rng.uniform(0, 3), rng.uniform(0.05, 2), rng.uniform(0.05, 2))


@pytest.mark.parametrize("kw", [dict(a=-1), dict(m=0), dict(n=-0.5)])
def test_params_validation(kw):
    with pytest.raises(ConfigurationError):
        NavigationParams(**kw)


def test_wind_values():
    assert not np.any(nav.wind(NavigationParams(), np.zeros(4)))
    np.testing.assert_array_equal(nav.wind(NavigationParams(1, 2, 3), [1, 0, 0, 0]), [0, 2, 0, 0])
    np.testing.assert_array_equal(nav.wind(NavigationParams(1, 1, 1), [0, 1, 0, 1]), [-1, 0, -1, 0])


def test_covector_hand_value():
    for m in (0.3, 1.0, 1.7):
        cov = nav.wind_covector(NavigationParams(1.0, m, m), [1, 0, 0, 0])
        assert cov[1] == pytest.approx(m / 2, rel=1e-15)
    assert not np.any(nav.wind_covector(NavigationParams(), np.zeros(4)))


def test_covector_vs_contraction(rng):
    for _ in range(300):
        p = _params(rng)
        x = rng.uniform(-3, 3, 4)
        direct = metric_matrix(p.a, x) @ nav.wind(p, x)
        np.testing.assert_allclose(nav.wind_covector(p, x), direct,
                                   atol=1e-12 * max(1.0, np.max(np.abs(direct))))


def test_sigma():
    assert nav.sigma(NavigationParams(), np.zeros(4)) == 0
    assert nav.sigma(NavigationParams(1, 2, 5), [1, 0, 1, 0]) == 7
    x = np.array([0.3, -1, 2, 0.5])
    assert nav.sigma(NavigationParams(1, 0.7, 0.7), x) == pytest.approx(0.7 * x @ x, rel=1e-15)


def test_wind_norm_sq_values():
    assert nav.wind_norm_sq(NavigationParams(), np.zeros(4)) == 0
    for m in (0.2, 0.9):
        assert nav.wind_norm_sq(NavigationParams(1, m, m), [1, 0, 0, 0]) \
            == pytest.approx(m * m / 2, rel=1e-14)


def test_wind_norm_sq_vs_contraction(rng):
    for _ in range(300):
        p = _params(rng)
        x = rng.uniform(-2, 2, 4)
        direct = nav.direct_wind_norm_sq(p.metric, p.field, x)
        assert nav.wind_norm_sq(p, x) == pytest.approx(direct, abs=1e-12 * max(1.0, direct))


def test_f_bound_special_cases(rng):
    x = rng.normal(size=4)
    r2 = x @ x
    assert nav.f_bound(NavigationParams(), np.zeros(4)) == 0
    assert nav.f_bound(NavigationParams(1.5, 0.4, 0.4), x) == pytest.approx(0.4 * r2 / (1 + 1.5 * r2))
    assert nav.f_bound(NavigationParams(0.0, 0.4, 0.9), x) == pytest.approx(0.9 * r2)


def test_domain_report_origin():
    d = nav.domain_report(NavigationParams(), np.zeros(4))
    assert d.in_domain_exact and d.in_domain_sufficient


def test_domain_global_when_m_equals_n_below_a(rng):
    p = NavigationParams(2.0, 0.5, 0.5)
    for _ in range(200):
        x = rng.normal(size=4) * rng.uniform(0, 50)
        assert nav.f_bound(p, x) < 0.25
        assert nav.domain_report(p, x).in_domain_sufficient


def test_sufficient_does_not_imply_exact():
    d = nav.domain_report(NavigationParams(2.0, 2.0, 2.0), [1, 0, 0, 0])
    assert d.f_value == pytest.approx(2 / 3, rel=1e-14)
    assert d.wind_norm_sq == pytest.approx(4 / 3, rel=1e-14)
    assert d.in_domain_sufficient and not d.in_domain_exact


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 3), st.floats(0.01, 1), st.floats(0.01, 1),
       st.lists(st.floats(-4, 4), min_size=4, max_size=4))
def test_bound_chain_for_small_rates(a, m, n, x):
    p = NavigationParams(a, m, n)
    f = nav.f_bound(p, x)
    assert f - nav.wind_norm_sq(p, x) >= -1e-12 * max(1.0, f)


def test_randers_data_origin():
    d = nav.randers_data(NavigationParams(), np.zeros(4))
    np.testing.assert_array_equal(d.a, np.eye(4))
    assert not np.any(d.b) and d.lam == 1.0


def test_randers_data_invariants(rng):
    for _ in range(200):
        p = _params(rng)
        x = _domain_point(rng, p)
        d = nav.randers_data(p, x)
        w2 = nav.wind_norm_sq(p, x)
        cholesky(d.a)
        assert d.b_norm() < 1
        assert d.b_norm() == pytest.approx(math.sqrt(w2), abs=1e-12)
        assert d.lam == pytest.approx(1 - nav.direct_wind_norm_sq(p.metric, p.field, x), abs=1e-14)


def test_randers_data_outside_domain():
    with pytest.raises(OutsideDomainError):
        nav.randers_data(NavigationParams(2, 2, 2), [1, 0, 0, 0])


def test_implicit_origin_is_euclidean(rng):
    y = rng.normal(size=4)
    assert nav.solve_implicit_F(NavigationParams(), np.zeros(4), y) == pytest.approx(np.linalg.norm(y))


def test_implicit_zero_vector():
    assert nav.solve_implicit_F(NavigationParams(), [0.2, 0, 0, 0], np.zeros(4)) == 0.0


def test_implicit_outside_domain():
    with pytest.raises(OutsideDomainError):
        nav.solve_implicit_F(NavigationParams(2, 2, 2), [1, 0, 0, 0], [1, 0, 0, 0])


def test_implicit_matches_randers_and_is_homogeneous(rng):
    for _ in range(200):
        p = _params(rng)
        x = _domain_point(rng, p)
        y = rng.normal(size=4)
        F = nav.solve_implicit_F(p, x, y)
        assert F > 0
        assert F == pytest.approx(nav.randers_F(nav.randers_data(p, x), y), abs=1e-12 * max(1, F))
        assert nav.implicit_residual(p.metric, p.field, x, y, F) < 1e-12 * max(1, F)
        for t in (0.5, 2.0, 10.0):
            assert nav.solve_implicit_F(p, x, t * y) == pytest.approx(t * F, rel=1e-12)


def test_implicit_non_reversible():
    p = NavigationParams(1.0, 0.5, 0.5)
    x = np.array([1.0, 0, 0, 0])
    y = nav.wind(p, x)
    assert nav.solve_implicit_F(p, x, y) < nav.solve_implicit_F(p, x, -y)
