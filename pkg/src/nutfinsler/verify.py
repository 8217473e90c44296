"""Verification suites behind the ``verify-*`` subcommands."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import isometry, navigation, riemann, sampling
from .exceptions import ConfigurationError
from .finsler import RandersHandle, ScanConfig, einstein_scan
from .navigation import NavigationParams
from .report import VerificationReport

DEFAULT_TOLERANCES = {
    # riemann
    "cross_construction": 1e-13,
    "decomposition": 1e-14,
    "compatibility": 1e-10,
    "bianchi": 1e-9,
    "ricci": 1e-7,
    "harmonicity": 1e-9,
    # killing
    "killing": 1e-9,
    "homothety_c": 1e-9,
    "homothety_deviation": 1e-9,
    # isometry
    "isometry": 1e-12,
    "equivariance": 1e-12,
    "norm": 1e-13,
    "group_law": 1e-13,
    "generator": 1e-9,
    "periodicity": 1e-12,
    # navigation / finsler
    "wind_norm": 1e-12,
    "covector": 1e-12,
    "implicit_F": 1e-12,
    "implicit_residual": 1e-12,
    "b_norm": 1e-12,
    "bound_chain": 1e-12,
    "einstein": 1e-6,
    "einstein_constant": 1e-8,
    "annihilation": 1e-8,
    "constant_K": 1e-7,
    "spread": 1e-3,
    "nonconstancy": 1e-3,
    # geodesic
    "drift": 1e-6,
}


@dataclass
class RunConfig:
    a: float = 1.0
    m: float = 0.5
    n: float = 0.5
    seed: int = 42
    samples: int = 200
    radius: float = 2.0
    tolerances: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if not self.samples >= 1:
            raise ConfigurationError(f"samples must be >= 1, got {self.samples}")
        if not self.radius > 0:
            raise ConfigurationError(f"radius must be > 0, got {self.radius}")
        if not self.a >= 0:
            raise ConfigurationError(f"a must be >= 0, got {self.a}")
        if not (self.m > 0 and self.n > 0):
            raise ConfigurationError(f"m and n must be > 0, got m={self.m}, n={self.n}")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        for name, value in self.tolerances.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigurationError(f"unknown tolerance {name!r}")
            if not value > 0:
                raise ConfigurationError(f"tolerance {name} must be positive")

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    @property
    def params(self) -> NavigationParams:
        return NavigationParams(self.a, self.m, self.n)

    def echo(self) -> dict:
        """Config as recorded in reports; worker count is deliberately absent."""
        out = asdict(self)
        out.pop("workers")
        out["tolerances"] = dict(sorted(self.tolerances.items()))
        return out


def _points(cfg: RunConfig, name: str, count: int | None = None):
    for i in range(cfg.samples if count is None else count):
        yield i, sampling.stream(cfg.seed, name, i)


def verify_riemann(cfg: RunConfig) -> VerificationReport:
    start = time.perf_counter()
    rep = VerificationReport("verify-riemann", cfg.echo())
    spec = riemann.TaubNut(cfg.a)
    cross = decomp = compat = bianchi = ric = 0.0
    min_eig = math.inf
    for _, rng in _points(cfg, "riemann"):
        x = sampling.ball(rng, cfg.radius)
        g = riemann.metric_matrix(spec, x)
        cross = max(cross, float(np.max(np.abs(g - riemann.metric_via_oneform(cfg.a, x)))))
        decomp = max(decomp, riemann.decomposition_check(x, cfg.a))
        min_eig = min(min_eig, float(np.min(np.linalg.eigvalsh(g))))
        compat = max(compat, metric_compatibility(spec, x))
        curv = riemann.curvature(spec, x)
        bianchi = max(bianchi, bianchi_residual(curv.riemann))
        ric = max(ric, float(np.max(np.abs(curv.ricci))))
    harm = 0.0
    for _, rng in _points(cfg, "harmonic"):
        y = sampling.ball_where(rng, cfg.radius, lambda p: np.linalg.norm(p) > 1e-3, dim=3)
        harm = max(harm, abs(riemann.harmonicity_check(cfg.a, y)))
    rep.add("metric_cross_construction", cross, cfg.tol("cross_construction"))
    rep.add("decomposition", decomp, cfg.tol("decomposition"))
    rep.add("metric_min_eigenvalue", min_eig, 0.0, ">")
    rep.add("metric_compatibility", compat, cfg.tol("compatibility"))
    rep.add("first_bianchi", bianchi, cfg.tol("bianchi"))
    rep.add("ricci_flat", ric, cfg.tol("ricci"))
    rep.add("harmonicity", harm, cfg.tol("harmonicity"))
    if cfg.a == 0:
        rep.labels.append("flat metric")
    rep.wall_time = time.perf_counter() - start
    return rep


def metric_compatibility(spec, x) -> float:
    """Max |nabla_k g_ij| using the jet Christoffels."""
    g, dg, _ = riemann.metric_derivatives(spec, x, order=1)
    gamma = riemann.christoffel(spec, x).gamma
    nabla = dg - np.einsum("lki,lj->kij", gamma, g) - np.einsum("lkj,il->kij", gamma, g)
    return float(np.max(np.abs(nabla)))


def bianchi_residual(R: np.ndarray) -> float:
    cyc = R + np.einsum("ijkl->iljk", R) + np.einsum("ijkl->iklj", R)
    return float(np.max(np.abs(cyc)))


def verify_killing(cfg: RunConfig, field=None) -> VerificationReport:
    start = time.perf_counter()
    rep = VerificationReport("verify-killing", cfg.echo())
    spec = riemann.TaubNut(cfg.a)
    field = cfg.params.field if field is None else field
    worst = worst_c = worst_dev = 0.0
    for _, rng in _points(cfg, "killing"):
        x = sampling.ball(rng, cfg.radius)
        res = riemann.killing_residual(spec, x, field)
        c, dev = riemann.homothety_constant_fit(res, riemann.metric_matrix(spec, x))
        worst = max(worst, float(np.max(np.abs(res))))
        worst_c = max(worst_c, abs(c))
        worst_dev = max(worst_dev, dev)
    rep.add("killing_residual", worst, cfg.tol("killing"))
    rep.add("homothety_constant_abs", worst_c, cfg.tol("homothety_c"))
    rep.add("homothety_deviation", worst_dev, cfg.tol("homothety_deviation"))
    rep.wall_time = time.perf_counter() - start
    return rep


def verify_isometry(cfg: RunConfig) -> VerificationReport:
    start = time.perf_counter()
    rep = VerificationReport("verify-isometry", cfg.echo())
    a, m, n = cfg.a, cfg.m, cfg.n
    worst = {k: 0.0 for k in ("iso", "equi", "norm", "group", "gen", "period")}
    for _, rng in _points(cfg, "isometry"):
        x = sampling.ball(rng, cfg.radius)
        t1, t2 = rng.uniform(-math.pi, math.pi, size=2)
        worst["iso"] = max(worst["iso"], isometry.isometry_residual(a, m, n, t1, x))
        worst["equi"] = max(worst["equi"], isometry.h_equivariance_residual(m, n, t1, x))
        worst["norm"] = max(worst["norm"], isometry.norm_residual(m, n, t1, x))
        worst["group"] = max(worst["group"], isometry.group_law_residual(m, n, t1, t2, x))
        gen = isometry.generator(m, n, x)
        worst["gen"] = max(worst["gen"], float(np.max(np.abs(gen - navigation.wind(cfg.params, x)))))
        worst["period"] = max(worst["period"], periodicity_residual(m, n, x))
    rep.add("isometry", worst["iso"], cfg.tol("isometry"))
    rep.add("h_equivariance", worst["equi"], cfg.tol("equivariance"))
    rep.add("norm_preservation", worst["norm"], cfg.tol("norm"))
    rep.add("group_law", worst["group"], cfg.tol("group_law"))
    rep.add("generator_vs_wind", worst["gen"], cfg.tol("generator"))
    rep.add("periodicity", worst["period"], cfg.tol("periodicity"))
    rep.wall_time = time.perf_counter() - start
    return rep


def periodicity_residual(m: float, n: float, x) -> float:
    """First block is 2 pi / m periodic, second block 2 pi / n periodic."""
    x = np.asarray(x, dtype=float)
    a = isometry.flow(m, n, 2 * math.pi / m, x)[:2] - x[:2]
    b = isometry.flow(m, n, 2 * math.pi / n, x)[2:] - x[2:]
    return float(max(np.max(np.abs(a)), np.max(np.abs(b))))


def navigation_checks(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport("navigation", cfg.echo())
    params = cfg.params
    metric, field = params.metric, params.field
    handle = RandersHandle.from_params(params)
    worst = {k: 0.0 for k in ("w2", "cov", "F", "imp", "bn")}
    max_b = 0.0
    for _, rng in _points(cfg, "navigation"):
        x = sampling.ball_where(rng, cfg.radius, lambda p: handle.wind_norm_sq(p) <= 0.99)
        y = sampling.unit_sphere(rng) * rng.uniform(0.1, 3.0)
        w2 = navigation.wind_norm_sq(params, x)
        direct = navigation.direct_wind_norm_sq(metric, field, x)
        worst["w2"] = max(worst["w2"], abs(w2 - direct))
        cov = navigation.wind_covector(params, x)
        direct_cov = riemann.metric_matrix(metric, x) @ navigation.wind(params, x)
        worst["cov"] = max(worst["cov"], float(np.max(np.abs(cov - direct_cov))))
        data = navigation.randers_data(params, x)
        F_imp = navigation.solve_implicit_F(params, x, y)
        worst["F"] = max(worst["F"], abs(F_imp - navigation.randers_F(data, y)))
        worst["imp"] = max(worst["imp"], navigation.implicit_residual(metric, field, x, y, F_imp))
        worst["bn"] = max(worst["bn"], abs(data.b_norm() - math.sqrt(direct)))
        max_b = max(max_b, data.b_norm())
    rep.add("wind_norm_sq_vs_direct", worst["w2"], cfg.tol("wind_norm"))
    rep.add("wind_covector_vs_direct", worst["cov"], cfg.tol("covector"))
    rep.add("implicit_F_vs_alpha_plus_beta", worst["F"], cfg.tol("implicit_F"))
    rep.add("implicit_equation_residual", worst["imp"], cfg.tol("implicit_residual"))
    rep.add("b_norm_vs_wind_norm", worst["bn"], cfg.tol("b_norm"))
    rep.add("b_norm_max", max_b, 1.0)

    # sufficient versus exact domain on the unit sphere |x| = 1
    sufficient_only = exact_violations = 0
    for _, rng in _points(cfg, "unit-sphere"):
        d = navigation.domain_report(params, sampling.unit_sphere(rng))
        exact_violations += not d.in_domain_exact
        sufficient_only += d.in_domain_sufficient and not d.in_domain_exact
    rep.statistics["unit_sphere_exact_violations"] = exact_violations
    rep.statistics["unit_sphere_sufficient_but_not_exact"] = sufficient_only
    if sufficient_only:
        rep.labels.append("f < 1 but |W|^2 >= 1 at |x| = 1: exact predicate governs")
    if params.m <= 1 and params.n <= 1:
        gap = math.inf
        for _, rng in _points(cfg, "bound-chain"):
            x = sampling.ball(rng, cfg.radius)
            f = navigation.f_bound(params, x)
            w2 = navigation.wind_norm_sq(params, x)
            gap = min(gap, (f - w2) / max(1.0, f))
        rep.add("bound_chain_f_minus_wind_norm", gap, -cfg.tol("bound_chain"), ">")
    return rep


def verify_finsler(cfg: RunConfig) -> VerificationReport:
    start = time.perf_counter()
    rep = VerificationReport("verify-finsler", cfg.echo())
    rep.extend(navigation_checks(cfg))
    handle = RandersHandle.from_params(cfg.params)
    constant_case = cfg.a == 0
    scan = einstein_scan(handle, ScanConfig(cfg.samples, cfg.seed, cfg.radius),
                         cfg.tol("einstein_constant" if constant_case else "einstein"),
                         cfg.tol("annihilation"), cfg.workers)
    rep.extend(scan)
    stats = scan.statistics
    if constant_case:
        rep.labels.append("constant case")
        rep.add("flag_curvature_max_abs", stats["flag_curvature_max_abs"], cfg.tol("constant_K"))
    else:
        rep.add("flag_curvature_spread", stats["flag_curvature_spread"], cfg.tol("spread"), ">")
        rep.add("constant_flag_residual_max_rel", stats["constant_flag_residual_max_rel"],
                cfg.tol("nonconstancy"), ">")
    rep.samples = scan.samples
    rep.wall_time = time.perf_counter() - start
    return rep


SUITES = {
    "verify-riemann": verify_riemann,
    "verify-killing": verify_killing,
    "verify-isometry": verify_isometry,
    "verify-finsler": verify_finsler,
}
