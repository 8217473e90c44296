"""Fixed-step RK4 geodesics of Randers and Riemannian metrics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, OutsideDomainError
from .finsler import F_value, RandersHandle, spray
from .riemann import as_metric, christoffel

EXIT_MARGIN = 0.999


@dataclass
class GeodesicTrace:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    F: np.ndarray
    step_count: int
    metric: str
    exited: bool = False

    def __len__(self) -> int:
        return len(self.t)


def _rk4(accel, x0, v0, t_end, steps, inside):
    if steps < 1:
        raise ConfigurationError("steps must be >= 1")
    h = float(t_end) / steps
    x = np.asarray(x0, dtype=float).copy()
    v = np.asarray(v0, dtype=float).copy()
    xs, vs = [x.copy()], [v.copy()]
    exited = False
    for _ in range(steps):
        try:
            k1x, k1v = v, accel(x, v)
            k2x, k2v = v + 0.5 * h * k1v, accel(x + 0.5 * h * k1x, v + 0.5 * h * k1v)
            k3x, k3v = v + 0.5 * h * k2v, accel(x + 0.5 * h * k2x, v + 0.5 * h * k2v)
            k4x, k4v = v + h * k3v, accel(x + h * k3x, v + h * k3v)
        except OutsideDomainError:
            # a trial stage left the domain before the step was accepted
            exited = True
            break
        x = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if not inside(x):
            exited = True
            break
        xs.append(x.copy())
        vs.append(v.copy())
    t = h * np.arange(len(xs))
    return t, np.array(xs), np.array(vs), exited


def integrate(handle: RandersHandle, x0, v0, t_end: float, steps: int) -> GeodesicTrace:
    """Solve x'' = -2 G(x, x') from (x0, v0).

    Stops early, with ``exited`` set, once |W|^2 reaches 0.999 along the path
    or an intermediate stage leaves the domain.
    """
    if not handle.in_domain(x0, EXIT_MARGIN):
        raise ConfigurationError("initial point is outside the navigation domain")
    if not np.any(v0):
        raise ConfigurationError("initial velocity must be nonzero")
    t, xs, vs, exited = _rk4(lambda x, v: -2.0 * spray(handle, x, v).G, x0, v0, t_end, steps,
                             lambda x: handle.in_domain(x, EXIT_MARGIN))
    F = np.array([F_value(handle, x, v) for x, v in zip(xs, vs)])
    name = f"randers[{getattr(handle.metric, 'name', 'metric')}, {handle.field!r}]"
    return GeodesicTrace(t, xs, vs, F, steps, name, exited)


def integrate_riemannian(spec, x0, v0, t_end: float, steps: int) -> GeodesicTrace:
    """Solve x'' = -Gamma(x)(x', x') with Christoffels from the Riemannian core."""
    def accel(x, v):
        return -np.einsum("ijk,j,k->i", christoffel(spec, x).gamma, v, v)

    t, xs, vs, exited = _rk4(accel, x0, v0, t_end, steps, lambda x: True)
    handle = RandersHandle.riemannian(as_metric(spec))
    F = np.array([F_value(handle, x, v) for x, v in zip(xs, vs)])
    return GeodesicTrace(t, xs, vs, F, steps, f"riemannian[{handle.metric.name}]", exited)


def conservation_report(trace: GeodesicTrace) -> tuple[float, float]:
    """Max |F(t) - F(0)| along the trace, absolute and relative to F(0)."""
    if len(trace) == 0:
        raise ConfigurationError("empty trace")
    drift = float(np.max(np.abs(trace.F - trace.F[0])))
    return drift, drift / float(trace.F[0]) if trace.F[0] > 0 else 0.0
