"""Taub-NUT and flat metrics on R^4 and their Riemannian tensor calculus.

Index conventions
-----------------
``gamma[i, j, k]`` is the Christoffel symbol with ``i`` raised.
``riemann[i, j, k, l]`` is the coefficient of ``e_i`` in ``R(e_k, e_l) e_j``
where ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]``; ``ricci[j, l]`` is
the trace over ``i = k``. The round sphere has positive sectional curvature
in this convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .exceptions import ConfigurationError, DegenerateFlagError, DomainError
from .linalg import spd_inverse

DIM = 4
SECTIONAL_THRESHOLD = 1e-12


class MetricSpec:
    """A Riemannian metric on R^4 given by component expressions.

    Subclasses implement :meth:`components`, which must accept four floats
    or four jets and return a symmetric 4x4 nested list of the same kind.
    """

    name = "metric"

    def components(self, x) -> list[list]:
        raise NotImplementedError

    def matrix(self, x) -> np.ndarray:
        return np.array(self.components([float(v) for v in x]), dtype=float)


@dataclass(frozen=True)
class TaubNut(MetricSpec):
    """Hawking Taub-NUT metric ``g_a``; ``a = 0`` is the Euclidean metric."""

    a: float = 1.0

    def __post_init__(self):
        if not self.a >= 0:
            raise ConfigurationError(f"Taub-NUT parameter must be >= 0, got {self.a}")

    @property
    def name(self) -> str:
        return f"taubnut(a={self.a!r})"

    def components(self, x):
        x1, x2, x3, x4 = x
        a = self.a
        B = a * (x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4) + 1.0
        A = a * (1.0 + 1.0 / B)
        return [
            [B - A * x2 * x2, A * x1 * x2, -A * x2 * x4, A * x2 * x3],
            [A * x1 * x2, B - A * x1 * x1, A * x1 * x4, -A * x1 * x3],
            [-A * x2 * x4, A * x1 * x4, B - A * x4 * x4, A * x3 * x4],
            [A * x2 * x3, -A * x1 * x3, A * x3 * x4, B - A * x3 * x3],
        ]


@dataclass(frozen=True)
class Flat(MetricSpec):
    name = "flat"

    @property
    def a(self) -> float:
        return 0.0

    def components(self, x):
        zero = 0.0 * x[0]
        return [[zero + (1.0 if i == j else 0.0) for j in range(DIM)] for i in range(DIM)]


def as_metric(spec) -> MetricSpec:
    """Accept a MetricSpec or a bare Taub-NUT parameter."""
    if isinstance(spec, MetricSpec):
        return spec
    return TaubNut(float(spec))


@dataclass(frozen=True)
class ChristoffelSymbols:
    gamma: np.ndarray


@dataclass(frozen=True)
class CurvatureTensors:
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float


def metric_matrix(spec, x) -> np.ndarray:
    return as_metric(spec).matrix(x)


def taubnut_scalars(a: float, x) -> tuple[float, float]:
    """Return ``(B, A)`` with ``B = a|x|^2 + 1`` and ``A = a(1 + 1/B)``."""
    B = a * float(np.dot(x, x)) + 1.0
    return B, a * (1.0 + 1.0 / B)


def oneform(x) -> np.ndarray:
    """Coefficients of -x2 dx1 + x1 dx2 - x4 dx3 + x3 dx4."""
    x1, x2, x3, x4 = np.asarray(x, dtype=float)
    return np.array([-x2, x1, -x4, x3])


def metric_via_oneform(a: float, x) -> np.ndarray:
    """(a|x|^2 + 1) g_0 - a(a|x|^2 + 2)/(a|x|^2 + 1) w (x) w, built independently of the component formula."""
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    w = oneform(x)
    return (a * r2 + 1.0) * np.eye(DIM) - a * (a * r2 + 2.0) / (a * r2 + 1.0) * np.outer(w, w)


def h_blocks(x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x1, x2, x3, x4 = np.asarray(x, dtype=float)
    u = np.array([x2, -x1])
    v = np.array([x4, -x3])
    return np.outer(u, u), np.outer(u, v), np.outer(v, v)


def h_matrix(x) -> np.ndarray:
    h1, h2, h3 = h_blocks(x)
    return np.block([[h1, h2], [h2.T, h3]])


def decomposition_check(x, a: float = 1.0) -> float:
    """Max-norm of G(x) - (B I - A H(x)) for the Taub-NUT metric."""
    B, A = taubnut_scalars(a, x)
    return float(np.max(np.abs(metric_matrix(a, x) - (B * np.eye(DIM) - A * h_matrix(x)))))


def metric_derivatives(spec, x, order: int = 2):
    """Metric and its coordinate derivatives, exact via jets.

    Returns ``(g, dg, ddg)`` with ``dg[m, i, j] = d_m g_ij`` and
    ``ddg[m, n, i, j] = d_m d_n g_ij`` (``ddg`` is None when ``order < 2``).
    """
    spec = as_metric(spec)
    cfg = jets.JetConfig(DIM, order)
    comps = spec.components(jets.seed(np.asarray(x, dtype=float), cfg))
    g = np.empty((DIM, DIM))
    dg = np.empty((DIM, DIM, DIM))
    ddg = np.empty((DIM, DIM, DIM, DIM)) if order >= 2 else None
    for i in range(DIM):
        for j in range(i, DIM):
            entry = comps[i][j]
            if not isinstance(entry, jets.Jet):
                entry = jets.Jet.constant(float(entry), cfg)
            g[i, j] = g[j, i] = entry.value
            dg[:, i, j] = dg[:, j, i] = entry.gradient()
            if ddg is not None:
                hess = entry.hessian()
                ddg[:, :, i, j] = ddg[:, :, j, i] = hess
    return g, dg, ddg


def _christoffel_parts(g, dg, ddg):
    ginv = spd_inverse(g)
    # first-kind symbols: lowered[l, j, k]
    lowered = 0.5 * (np.einsum("jlk->ljk", dg) + np.einsum("kjl->ljk", dg) - dg)
    gamma = np.einsum("il,ljk->ijk", ginv, lowered)
    if ddg is None:
        return ginv, gamma, None
    d_lowered = 0.5 * (np.einsum("mjlk->mljk", ddg) + np.einsum("mkjl->mljk", ddg) - ddg)
    d_ginv = -np.einsum("ia,mab,bl->mil", ginv, dg, ginv)
    d_gamma = (np.einsum("mil,ljk->mijk", d_ginv, lowered)
               + np.einsum("il,mljk->mijk", ginv, d_lowered))
    return ginv, gamma, d_gamma


def christoffel(spec, x) -> ChristoffelSymbols:
    g, dg, _ = metric_derivatives(spec, x, order=1)
    return ChristoffelSymbols(_christoffel_parts(g, dg, None)[1])


def riemann_from_gamma(gamma: np.ndarray, d_gamma: np.ndarray) -> np.ndarray:
    """R^i_{jkl} from Christoffels and their derivatives ``d_gamma[m, i, j, k]``."""
    return (np.einsum("kilj->ijkl", d_gamma) - np.einsum("likj->ijkl", d_gamma)
            + np.einsum("ikm,mlj->ijkl", gamma, gamma)
            - np.einsum("ilm,mkj->ijkl", gamma, gamma))


def curvature(spec, x) -> CurvatureTensors:
    g, dg, ddg = metric_derivatives(spec, x, order=2)
    ginv, gamma, d_gamma = _christoffel_parts(g, dg, ddg)
    riemann = riemann_from_gamma(gamma, d_gamma)
    ricci = np.einsum("ijil->jl", riemann)
    return CurvatureTensors(riemann, ricci, float(np.einsum("jl,jl->", ginv, ricci)))


def sectional_curvature(spec, x, u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    g = metric_matrix(spec, x)
    denom = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
    if denom < SECTIONAL_THRESHOLD:
        raise DegenerateFlagError(f"degenerate plane, Gram determinant {denom:.3e}")
    riemann = curvature(spec, x).riemann
    numer = np.einsum("im,mjkl,i,j,k,l->", g, riemann, u, v, u, v)
    return float(numer / denom)


def killing_residual(spec, x, field) -> np.ndarray:
    """W_{i|j} + W_{j|i} for the lowered field W_i = g_ij W^j."""
    x = np.asarray(x, dtype=float)
    g, dg, _ = metric_derivatives(spec, x, order=1)
    gamma = _christoffel_parts(g, dg, None)[1]
    cfg = jets.JetConfig(DIM, 1)
    comps = field(jets.seed(x, cfg))
    w_up = np.empty(DIM)
    dw_up = np.empty((DIM, DIM))  # dw_up[j, k] = d_j W^k
    for k, c in enumerate(comps):
        if not isinstance(c, jets.Jet):
            c = jets.Jet.constant(float(c), cfg)
        w_up[k] = c.value
        dw_up[:, k] = c.gradient()
    w_down = g @ w_up
    dw_down = np.einsum("jik,k->ji", dg, w_up) + np.einsum("ik,jk->ji", g, dw_up)
    cov = dw_down.T - np.einsum("kij,k->ij", gamma, w_down)  # cov[i, j] = W_{i|j}
    return cov + cov.T


def homothety_constant_fit(residual, metric) -> tuple[float, float]:
    """Least-squares ``c`` with ``residual ~ -4 c g``; returns ``(c, ||residual + 4 c g||_F)``."""
    residual = np.asarray(residual, dtype=float)
    metric = np.asarray(metric, dtype=float)
    c = -float(np.sum(residual * metric)) / (4.0 * float(np.sum(metric * metric)))
    deviation = float(np.linalg.norm(residual + 4.0 * c * metric))
    return c, deviation


def harmonic_potential(a: float, y):
    """u_a(y) = (1/|y| + a) / 4 on R^3 minus the origin; accepts floats or jets."""
    r = jets.sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])
    return (1.0 / r + a) * 0.25


def harmonicity_check(a: float, y) -> float:
    """Euclidean Laplacian of u_a at ``y``."""
    y = np.asarray(y, dtype=float)
    if y.shape != (3,):
        raise ConfigurationError("harmonicity check expects a point in R^3")
    if not np.any(y):
        raise DomainError("u_a is singular at the origin")
    u = harmonic_potential(a, jets.seed(y, jets.JetConfig(3, 2)))
    return float(np.trace(u.hessian()))
