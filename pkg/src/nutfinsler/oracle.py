"""Finite-difference oracle, independent of the jet code path.

Central differences with base step 1e-4 and one Richardson level,
``D = (4 D(h/2) - D(h)) / 3``. Second derivatives nest two first
derivatives. Curvature assembly is written with explicit loops so it does
not share tensor-contraction code with :mod:`nutfinsler.riemann`.
"""
from __future__ import annotations

import numpy as np

from .riemann import as_metric
from .linalg import spd_inverse

BASE_STEP = 1e-4


def partial(f, x, i: int, h: float = BASE_STEP) -> np.ndarray:
    x = np.asarray(x, dtype=float)

    def central(step):
        e = np.zeros_like(x)
        e[i] = step
        return (np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2.0 * step)

    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def gradient(f, x, h: float = BASE_STEP) -> np.ndarray:
    """Stack of partials; axis 0 is the differentiation variable."""
    return np.array([partial(f, x, i, h) for i in range(len(x))])


def christoffel(spec, x) -> np.ndarray:
    spec = as_metric(spec)
    g = spec.matrix(x)
    dg = gradient(spec.matrix, x)
    ginv = spd_inverse(g)
    gamma = np.zeros((4, 4, 4))
    for i in range(4):
        for j in range(4):
            for k in range(4):
                gamma[i, j, k] = 0.5 * sum(
                    ginv[i, l] * (dg[j, l, k] + dg[k, j, l] - dg[l, j, k]) for l in range(4))
    return gamma


def riemann(spec, x) -> np.ndarray:
    """R^i_{jkl} by differencing the FD Christoffels."""
    gamma = christoffel(spec, x)
    d_gamma = gradient(lambda p: christoffel(spec, p), x)
    R = np.zeros((4, 4, 4, 4))
    for i in range(4):
        for j in range(4):
            for k in range(4):
                for l in range(4):
                    val = d_gamma[k, i, l, j] - d_gamma[l, i, k, j]
                    for m in range(4):
                        val += gamma[i, k, m] * gamma[m, l, j] - gamma[i, l, m] * gamma[m, k, j]
                    R[i, j, k, l] = val
    return R


def ricci(spec, x) -> np.ndarray:
    R = riemann(spec, x)
    return np.array([[sum(R[i, j, i, l] for i in range(4)) for l in range(4)] for j in range(4)])


def endomorphism(spray_fn, x, y) -> np.ndarray:
    """R^i_k from finite differences of the spray ``spray_fn(x, y) -> G``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    G = np.asarray(spray_fn(x, y))
    dG_dx = gradient(lambda p: spray_fn(p, y), x)             # [k, i]
    dG_dy = gradient(lambda q: spray_fn(x, q), y)             # [j, i]
    dG_dxdy = gradient(lambda p: gradient(lambda q: spray_fn(p, q), y), x)  # [j, k, i]
    dG_dydy = gradient(lambda q: gradient(lambda r: spray_fn(x, r), q), y)  # [j, k, i]
    R = np.zeros((4, 4))
    for i in range(4):
        for k in range(4):
            val = 2.0 * dG_dx[k, i]
            for j in range(4):
                val -= y[j] * dG_dxdy[j, k, i]
                val += 2.0 * G[j] * dG_dydy[j, k, i]
                val -= dG_dy[j, i] * dG_dy[k, j]
            R[i, k] = val
    return R
