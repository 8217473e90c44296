"""Randers metric from navigation data, its spray and curvature.

Everything at a point ``(x, y)`` comes from one jet of ``F^2`` seeded in
the eight variables ``(x^1..x^4, y^1..y^4)``. The spray coefficients

    G^i = 1/4 g^{il} (y^k d^2F^2/dx^k dy^l - dF^2/dx^l)

are then formed as order-2 jets, which carries every derivative the Riemann
endomorphism needs.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import jets, sampling
from .exceptions import ConfigurationError, DegenerateFlagError, DomainError, OutsideDomainError
from .fields import ZeroField
from .linalg import generic_cholesky_solve, spd_solve
from .navigation import NavigationParams, direct_wind_norm_sq, navigation_data, randers_F
from .report import VerificationReport
from .riemann import DIM, Flat, MetricSpec, TaubNut

FLAG_THRESHOLD = 1e-12


@dataclass(frozen=True)
class RandersHandle:
    """Navigation pair (metric, wind) defining F = alpha + beta."""

    metric: MetricSpec = dc_field(default_factory=lambda: TaubNut(1.0))
    field: object = dc_field(default_factory=ZeroField)

    @classmethod
    def from_params(cls, params: NavigationParams) -> "RandersHandle":
        return cls(params.metric, params.field)

    @classmethod
    def riemannian(cls, metric: MetricSpec) -> "RandersHandle":
        return cls(metric, ZeroField())

    @classmethod
    def flat(cls) -> "RandersHandle":
        return cls(Flat(), ZeroField())

    def wind_norm_sq(self, x) -> float:
        return direct_wind_norm_sq(self.metric, self.field, x)

    def in_domain(self, x, margin: float = 1.0) -> bool:
        return self.wind_norm_sq(x) < margin


@dataclass(frozen=True)
class FundamentalTensor:
    g_y: np.ndarray


@dataclass(frozen=True)
class SprayCoefficients:
    G: np.ndarray


@dataclass(frozen=True)
class RiemannEndomorphism:
    R: np.ndarray


@dataclass(frozen=True)
class PointCurvature:
    """Everything computed from one order-4 evaluation at ``(x, y)``."""

    x: np.ndarray
    y: np.ndarray
    F: float
    F_y: np.ndarray
    g_y: np.ndarray
    G: np.ndarray
    R: np.ndarray

    @property
    def ricci(self) -> float:
        return float(np.trace(self.R))

    def flag_curvature(self, V) -> float:
        V = np.asarray(V, dtype=float)
        y, g = self.y, self.g_y
        denom = (y @ g @ y) * (V @ g @ V) - (y @ g @ V) ** 2
        if denom < FLAG_THRESHOLD:
            raise DegenerateFlagError(f"degenerate flag, Gram determinant {denom:.3e}")
        return float(V @ g @ (self.R @ V) / denom)

    def constant_flag_residual(self) -> tuple[float, float]:
        target = self.F ** 2 * np.eye(DIM) - self.F * np.outer(self.y, self.F_y)
        lam = float(np.sum(self.R * target) / np.sum(target * target))
        return lam, float(np.linalg.norm(self.R - lam * target))


def F_squared_jet(handle: RandersHandle, x, y, order: int = 4) -> jets.Jet:
    """F^2 as a jet in the eight seeds (x, y)."""
    point = np.concatenate([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])
    seeds = jets.seed(point, jets.JetConfig(2 * DIM, order))
    xs, ys = seeds[:DIM], seeds[DIM:]
    g = handle.metric.components(xs)
    w_up = handle.field(xs)
    w_down = [sum((g[i][j] * w_up[j] for j in range(1, DIM)), g[i][0] * w_up[0])
              for i in range(DIM)]
    lam = 1.0 - sum((w_down[i] * w_up[i] for i in range(1, DIM)), w_down[0] * w_up[0])
    lam_value = lam.value if isinstance(lam, jets.Jet) else float(lam)
    if not lam_value > 0.0:
        raise OutsideDomainError(f"|W|^2 = {1.0 - lam_value:.6g} >= 1")
    gyy = 0.0
    for i in range(DIM):
        row = g[i][i] * ys[i]
        for j in range(i + 1, DIM):
            row = row + 2.0 * g[i][j] * ys[j]
        gyy = row * ys[i] + gyy
    wy = sum((w_down[i] * ys[i] for i in range(1, DIM)), w_down[0] * ys[0])
    beta_neg = wy / lam
    alpha = (gyy / lam + beta_neg * beta_neg).sqrt()
    F = alpha - beta_neg
    return F * F


def _check_y(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        raise DomainError("y = 0 is not a valid flag pole")
    return y


def F_value(handle: RandersHandle, x, y) -> float:
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        return 0.0
    return randers_F(navigation_data(handle.metric, handle.field, x), y)


def fundamental_tensor(handle: RandersHandle, x, y) -> FundamentalTensor:
    y = _check_y(y)
    H = F_squared_jet(handle, x, y, order=2).hessian()
    return FundamentalTensor(0.5 * H[DIM:, DIM:])


def spray(handle: RandersHandle, x, y) -> SprayCoefficients:
    """Geodesic coefficients at a single point, no derivatives."""
    y = _check_y(y)
    E = F_squared_jet(handle, x, y, order=2)
    H = E.hessian()
    grad = E.gradient()
    rhs = H[:DIM, DIM:].T @ y - grad[:DIM]
    return SprayCoefficients(0.25 * spd_solve(0.5 * H[DIM:, DIM:], rhs))


def point_curvature(handle: RandersHandle, x, y) -> PointCurvature:
    x = np.asarray(x, dtype=float)
    y = _check_y(y)
    E = F_squared_jet(handle, x, y, order=4)
    n = 2 * DIM
    y_jets = jets.seed(np.concatenate([x, y]), jets.JetConfig(n, 2))[DIM:]
    first_y = [E.derivative(DIM + l) for l in range(DIM)]
    g_y = [[0.5 * first_y[i].derivative(DIM + j) for j in range(DIM)] for i in range(DIM)]
    rhs = []
    for l in range(DIM):
        mixed = sum((y_jets[k] * first_y[l].derivative(k) for k in range(1, DIM)),
                    y_jets[0] * first_y[l].derivative(0))
        rhs.append(0.25 * (mixed - E.derivative(l).truncate(2)))
    G_jets = generic_cholesky_solve(g_y, rhs)

    G = np.array([Gi.value for Gi in G_jets])
    grads = np.array([Gi.gradient() for Gi in G_jets])
    hessians = np.array([Gi.hessian() for Gi in G_jets])
    dG_dx = grads[:, :DIM]                 # [i, k] = dG^i/dx^k
    dG_dy = grads[:, DIM:]                 # [i, j] = dG^i/dy^j
    dG_dxdy = hessians[:, :DIM, DIM:]      # [i, j, k] = d2G^i/dx^j dy^k
    dG_dydy = hessians[:, DIM:, DIM:]      # [i, j, k] = d2G^i/dy^j dy^k
    R = (2.0 * dG_dx
         - np.einsum("j,ijk->ik", y, dG_dxdy)
         + 2.0 * np.einsum("j,ijk->ik", G, dG_dydy)
         - dG_dy @ dG_dy)

    F2 = E.value
    F = float(np.sqrt(F2))
    F_y = E.gradient()[DIM:] / (2.0 * F)
    g_mat = np.array([[gij.value for gij in row] for row in g_y])
    return PointCurvature(x, y, F, F_y, g_mat, G, R)


def riemann_endomorphism(handle: RandersHandle, x, y) -> RiemannEndomorphism:
    return RiemannEndomorphism(point_curvature(handle, x, y).R)


def ricci(handle: RandersHandle, x, y) -> float:
    """Ric(x, y), the trace of the Riemann endomorphism."""
    return point_curvature(handle, x, y).ricci


def flag_curvature(handle: RandersHandle, x, y, V) -> float:
    return point_curvature(handle, x, y).flag_curvature(V)


def constant_flag_residual(handle: RandersHandle, x, y) -> tuple[float, float]:
    """Best constant ``K`` in R = K (F^2 I - F y (x) F_y), and the Frobenius misfit."""
    return point_curvature(handle, x, y).constant_flag_residual()


# ---------------------------------------------------------------------------
# sampled scans


@dataclass(frozen=True)
class ScanConfig:
    samples: int = 200
    seed: int = 42
    radius: float = 2.0
    margin: float = 0.99


@dataclass(frozen=True)
class FlagSample:
    index: int
    x: np.ndarray
    y: np.ndarray
    V: np.ndarray
    F: float
    ricci: float
    K: float
    K_fit: float
    const_residual: float
    R_norm: float
    annihilation: float


def sample_flag(handle: RandersHandle, config: ScanConfig, index: int) -> FlagSample:
    """Draw and evaluate flag ``index``; depends only on (handle, config, index)."""
    rng = sampling.stream(config.seed, "flag", index)
    x = sampling.ball_where(rng, config.radius,
                            lambda p: handle.wind_norm_sq(p) <= config.margin)
    y = sampling.unit_sphere(rng)
    pc = point_curvature(handle, x, y)
    for _ in range(sampling.MAX_REJECTIONS):
        V = sampling.unit_sphere(rng)
        try:
            K = pc.flag_curvature(V)
            break
        except DegenerateFlagError:
            continue
    K_fit, residual = pc.constant_flag_residual()
    R_norm = float(np.linalg.norm(pc.R))
    return FlagSample(index, x, y, V, pc.F, pc.ricci, K, K_fit, residual, R_norm,
                      float(np.linalg.norm(pc.R @ y)))


def _sample_task(args):
    return sample_flag(*args)


def scan_flags(handle: RandersHandle, config: ScanConfig, workers: int = 1) -> list[FlagSample]:
    if config.samples < 1:
        raise ConfigurationError("a scan needs at least one sample")
    tasks = [(handle, config, i) for i in range(config.samples)]
    if workers <= 1:
        return [sample_flag(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sample_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def einstein_scan(handle: RandersHandle, config: ScanConfig, einstein_tol: float = 1e-6,
                  annihilation_tol: float = 1e-8, workers: int = 1) -> VerificationReport:
    """Sample flags in the margin-restricted domain and check Ric = 0.

    Flag-curvature extremes and the constant-curvature misfit are recorded
    as statistics; pass/fail on those is left to the caller.
    """
    start = time.perf_counter()
    samples = scan_flags(handle, config, workers)
    report = VerificationReport("einstein-scan")
    ratios = [abs(s.ricci) / s.F ** 2 for s in samples]
    report.add("einstein_ric_over_F2", max(ratios), einstein_tol)
    # F^2 floors the scale where the curvature itself vanishes
    report.add("pole_annihilation",
               max(s.annihilation / max(s.R_norm, s.F ** 2) for s in samples), annihilation_tol)
    Ks = [s.K for s in samples]
    report.statistics.update({
        "samples": len(samples),
        "flag_curvature_min": min(Ks),
        "flag_curvature_max": max(Ks),
        "flag_curvature_spread": max(Ks) - min(Ks),
        "flag_curvature_max_abs": max(abs(k) for k in Ks),
        "constant_flag_residual_max_rel": max(s.const_residual / s.R_norm if s.R_norm > 0 else 0.0
                                              for s in samples),
        "ric_over_F2_max": max(ratios),
    })
    report.samples = samples
    report.wall_time = time.perf_counter() - start
    return report
