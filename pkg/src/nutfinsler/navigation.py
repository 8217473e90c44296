"""Zermelo navigation data for the Taub-NUT metric and the rotation wind W_{m,n}.

Two domain predicates are tracked side by side. ``f_bound(x) < 1`` is the
closed-form sufficient condition; ``wind_norm_sq(x) < 1`` is what the
navigation construction actually needs and is the one enforced here. The
former does not imply the latter once ``m`` or ``n`` exceeds 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, OutsideDomainError
from .fields import RotationField
from .linalg import cholesky
from .riemann import MetricSpec, TaubNut, metric_matrix, taubnut_scalars


@dataclass(frozen=True)
class NavigationParams:
    a: float = 1.0
    m: float = 0.5
    n: float = 0.5

    def __post_init__(self):
        if not self.a >= 0:
            raise ConfigurationError(f"a must be >= 0, got {self.a}")
        if not (self.m > 0 and self.n > 0):
            raise ConfigurationError(f"m and n must be > 0, got m={self.m}, n={self.n}")

    @property
    def metric(self) -> TaubNut:
        return TaubNut(self.a)

    @property
    def field(self) -> RotationField:
        return RotationField(self.m, self.n)


@dataclass(frozen=True)
class RandersPointData:
    a: np.ndarray
    b: np.ndarray
    lam: float

    def b_norm(self) -> float:
        """Length of ``b`` measured by the inverse of ``a``."""
        return math.sqrt(float(self.b @ np.linalg.solve(self.a, self.b)))


@dataclass(frozen=True)
class DomainReport:
    x: tuple
    f_value: float
    wind_norm_sq: float
    in_domain_sufficient: bool
    in_domain_exact: bool


def wind(params: NavigationParams, x) -> np.ndarray:
    x1, x2, x3, x4 = np.asarray(x, dtype=float)
    return np.array([-params.m * x2, params.m * x1, -params.n * x4, params.n * x3])


def sigma(params: NavigationParams, x) -> float:
    x1, x2, x3, x4 = np.asarray(x, dtype=float)
    return params.m * (x1 * x1 + x2 * x2) + params.n * (x3 * x3 + x4 * x4)


def wind_covector(params: NavigationParams, x) -> np.ndarray:
    """Closed-form lowered wind W_j = W^j (B - sigma A / m) (first pair), ``/ n`` (second pair)."""
    B, A = taubnut_scalars(params.a, x)
    s = sigma(params, x)
    w = wind(params, x)
    scale = np.array([B - s * A / params.m] * 2 + [B - s * A / params.n] * 2)
    return w * scale


def wind_norm_sq(params: NavigationParams, x) -> float:
    """|W|^2 via the block formula, without forming the metric."""
    B, A = taubnut_scalars(params.a, x)
    s = sigma(params, x)
    w = wind(params, x)
    return float((w[0] ** 2 + w[1] ** 2) * (B - s * A / params.m)
                 + (w[2] ** 2 + w[3] ** 2) * (B - s * A / params.n))


def direct_wind_norm_sq(metric: MetricSpec, field, x) -> float:
    """g(W, W) by plain contraction; works for any metric and field."""
    g = metric_matrix(metric, x)
    w = np.asarray(field([float(v) for v in x]), dtype=float)
    return float(w @ g @ w)


def f_bound(params: NavigationParams, x) -> float:
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    a = params.a
    p = max(params.m, params.n)
    gap = abs(params.m - params.n)
    return r2 / (1.0 + a * r2) * (p + 2.0 * a * gap * r2 + a * a * gap * r2 * r2)


def domain_report(params: NavigationParams, x) -> DomainReport:
    f = f_bound(params, x)
    w2 = wind_norm_sq(params, x)
    return DomainReport(tuple(float(v) for v in x), f, w2, f < 1.0, w2 < 1.0)


def navigation_data(metric: MetricSpec, field, x) -> RandersPointData:
    """Randers data (a_ij, b_i, lambda) of the navigation pair (g, W) at ``x``."""
    g = metric_matrix(metric, x)
    w_up = np.asarray(field([float(v) for v in x]), dtype=float)
    w_down = g @ w_up
    lam = 1.0 - float(w_down @ w_up)
    if not lam > 0.0:
        raise OutsideDomainError(f"|W|^2 = {1.0 - lam:.6g} >= 1 at x = {list(map(float, x))}")
    a = g / lam + np.outer(w_down, w_down) / lam ** 2
    return RandersPointData(a, -w_down / lam, lam)


def randers_data(params: NavigationParams, x) -> RandersPointData:
    return navigation_data(params.metric, params.field, x)


def implicit_F(metric: MetricSpec, field, x, y) -> float:
    """Positive root of (1 - |W|^2) F^2 + 2 g(y, W) F - g(y, y) = 0."""
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        return 0.0
    g = metric_matrix(metric, x)
    w = np.asarray(field([float(v) for v in x]), dtype=float)
    lam = 1.0 - float(w @ g @ w)
    if not lam > 0.0:
        raise OutsideDomainError(f"|W|^2 = {1.0 - lam:.6g} >= 1")
    yw = float(y @ g @ w)
    yy = float(y @ g @ y)
    root = math.sqrt(yw * yw + lam * yy)
    # pick the algebraically stable form of the + branch
    if yw > 0:
        return yy / (yw + root)
    return (root - yw) / lam


def solve_implicit_F(params: NavigationParams, x, y) -> float:
    return implicit_F(params.metric, params.field, x, y)


def implicit_residual(metric: MetricSpec, field, x, y, F: float) -> float:
    """|F - sqrt(g(y - F W, y - F W))|."""
    g = metric_matrix(metric, x)
    w = np.asarray(field([float(v) for v in x]), dtype=float)
    d = np.asarray(y, dtype=float) - F * w
    return abs(F - math.sqrt(float(d @ g @ d)))


def randers_F(data: RandersPointData, y) -> float:
    y = np.asarray(y, dtype=float)
    return math.sqrt(float(y @ data.a @ y)) + float(data.b @ y)


def check_randers_invariants(data: RandersPointData) -> bool:
    cholesky(data.a)
    return data.b_norm() < 1.0 and 0.0 < data.lam <= 1.0

