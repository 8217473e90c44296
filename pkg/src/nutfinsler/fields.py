"""Vector fields on R^4 as evaluation handles.

A field is any callable taking four coordinates (floats or jets) and
returning four components of the same kind.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RotationField:
    """W_{m,n} = -m x2 d1 + m x1 d2 - n x4 d3 + n x3 d4 (1-based coordinates)."""

    m: float
    n: float

    def __call__(self, x):
        return [-self.m * x[1], self.m * x[0], -self.n * x[3], self.n * x[2]]


@dataclass(frozen=True)
class ZeroField:
    def __call__(self, x):
        return [0.0 * x[0] for _ in range(4)]


@dataclass(frozen=True)
class ConstantField:
    """Translation field; Killing for the flat metric only."""

    components: tuple[float, float, float, float]

    def __call__(self, x):
        return [0.0 * x[0] + c for c in self.components]


@dataclass(frozen=True)
class DilationField:
    """Radial field c * x, homothetic for the flat metric."""

    scale: float

    def __call__(self, x):
        return [self.scale * xi for xi in x]
