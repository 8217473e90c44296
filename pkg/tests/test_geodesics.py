import numpy as np
import pytest

from nutfinsler import geodesics, riemann
from nutfinsler.exceptions import ConfigurationError
from nutfinsler.fields import ConstantField
from nutfinsler.finsler import RandersHandle
from nutfinsler.navigation import NavigationParams

HEADLINE = RandersHandle.from_params(NavigationParams(1.0, 0.5, 0.5))
X0 = np.array([0.5, 0.2, -0.3, 0.1])
V0 = np.array([0.3, -0.2, 0.5, 0.1])


def test_flat_straight_line():
    tr = geodesics.integrate(RandersHandle.flat(), X0, V0, 2.0, 20)
    np.testing.assert_allclose(tr.x, X0 + np.outer(tr.t, V0), atol=1e-15)
    np.testing.assert_allclose(tr.F, np.linalg.norm(V0), rtol=1e-15)
    assert tr.step_count == 20 and len(tr) == 21 and not tr.exited


def test_minkowski_randers_straight_line():
    h = RandersHandle(riemann.Flat(), ConstantField((0.2, 0.1, -0.3, 0.0)))
    tr = geodesics.integrate(h, X0, V0, 1.0, 10)
    np.testing.assert_allclose(tr.x, X0 + np.outer(tr.t, V0), atol=1e-14)


def test_riemannian_paths_agree():
    spec = riemann.TaubNut(1.0)
    a = geodesics.integrate(RandersHandle.riemannian(spec), X0, V0, 1.0, 50)
    b = geodesics.integrate_riemannian(spec, X0, V0, 1.0, 50)
    np.testing.assert_allclose(a.x, b.x, atol=1e-12)
    assert geodesics.conservation_report(b)[1] < 1e-8


def test_headline_conservation():
    tr = geodesics.integrate(HEADLINE, X0, V0, 1.0, 200)
    drift, rel = geodesics.conservation_report(tr)
    assert rel < 1e-6
    assert drift == pytest.approx(rel * tr.F[0])


def test_exit_detection():
    h = RandersHandle.from_params(NavigationParams(0.0, 1.0, 1.0))
    tr = geodesics.integrate(h, [0.5, 0, 0, 0], [1.0, 0, 0, 0], 2.0, 100)
    assert tr.exited
    assert np.all([h.wind_norm_sq(x) < 0.999 for x in tr.x])


@pytest.mark.parametrize("kwargs", [dict(steps=0), dict(v0=np.zeros(4)),
                                    dict(x0=np.array([5.0, 0, 0, 0]))])
def test_bad_inputs(kwargs):
    args = dict(x0=X0, v0=V0, t_end=1.0, steps=10) | kwargs
    h = RandersHandle.from_params(NavigationParams(0.0, 1.0, 1.0))
    with pytest.raises(ConfigurationError):
        geodesics.integrate(h, **args)
