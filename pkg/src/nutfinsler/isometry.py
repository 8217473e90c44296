"""The block-rotation flow on R^4 and checks that it preserves the Taub-NUT metric."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .riemann import h_blocks, metric_matrix

GENERATOR_STEP = 1e-6


def _planar(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class BlockRotation:
    theta: float
    m: float
    n: float

    @property
    def block_m(self) -> np.ndarray:
        return _planar(self.m * self.theta)

    @property
    def block_n(self) -> np.ndarray:
        return _planar(self.n * self.theta)

    @property
    def matrix(self) -> np.ndarray:
        out = np.zeros((4, 4))
        out[:2, :2] = self.block_m
        out[2:, 2:] = self.block_n
        return out


@dataclass(frozen=True)
class FlowMap:
    """phi_theta(x) = A_theta x."""

    m: float
    n: float

    def __call__(self, x, theta: float) -> np.ndarray:
        return rotation(self.m, self.n, theta).matrix @ np.asarray(x, dtype=float)


def rotation(m: float, n: float, theta: float) -> BlockRotation:
    return BlockRotation(float(theta), float(m), float(n))


def flow(m: float, n: float, theta: float, x) -> np.ndarray:
    return FlowMap(m, n)(x, theta)


def isometry_residual(a: float, m: float, n: float, theta: float, x) -> float:
    """Max-norm of A^T G(phi_theta x) A - G(x)."""
    A = rotation(m, n, theta).matrix
    x = np.asarray(x, dtype=float)
    pulled = A.T @ metric_matrix(a, A @ x) @ A
    return float(np.max(np.abs(pulled - metric_matrix(a, x))))


def h_equivariance_residual(m: float, n: float, theta: float, x) -> float:
    """Largest of the three block residuals H_k(x) - R^T H_k(phi_theta x) R."""
    rot = rotation(m, n, theta)
    x = np.asarray(x, dtype=float)
    h1x, h2x, h3x = h_blocks(x)
    h1y, h2y, h3y = h_blocks(rot.matrix @ x)
    Am, An = rot.block_m, rot.block_n
    return float(max(np.max(np.abs(h1x - Am.T @ h1y @ Am)),
                     np.max(np.abs(h2x - Am.T @ h2y @ An)),
                     np.max(np.abs(h3x - An.T @ h3y @ An))))


def generator(m: float, n: float, p, step: float = GENERATOR_STEP) -> np.ndarray:
    """d/dtheta phi_theta(p) at theta = 0 by a central difference."""
    return (flow(m, n, step, p) - flow(m, n, -step, p)) / (2.0 * step)


def group_law_residual(m: float, n: float, theta1: float, theta2: float, x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(flow(m, n, theta1 + theta2, x)
                                - flow(m, n, theta1, flow(m, n, theta2, x))))


def norm_residual(m: float, n: float, theta: float, x) -> float:
    x = np.asarray(x, dtype=float)
    return abs(float(np.linalg.norm(flow(m, n, theta, x))) - float(np.linalg.norm(x)))
