"""Seeded, splittable sampling.

Every draw comes from a Philox-4x64 counter-based generator keyed by
``numpy.random.SeedSequence(seed, spawn_key=(stream_id, index))``, where
``stream_id`` is the CRC-32 of a stream name such as ``"flag"``. Sample
``i`` of a stream therefore does not depend on how many samples precede
it or which worker draws it.
"""
from __future__ import annotations

import zlib

import numpy as np

from .exceptions import ConfigurationError

MAX_REJECTIONS = 100_000


def stream(seed: int, name: str, index: int) -> np.random.Generator:
    key = (zlib.crc32(name.encode()), int(index))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=key)))


def unit_sphere(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    while True:
        v = rng.standard_normal(dim)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return v / norm


def ball(rng: np.random.Generator, radius: float, dim: int = 4) -> np.ndarray:
    """Uniform point in the Euclidean ball of the given radius."""
    return radius * rng.random() ** (1.0 / dim) * unit_sphere(rng, dim)


def ball_where(rng: np.random.Generator, radius: float, accept, dim: int = 4) -> np.ndarray:
    """Uniform point in the ball conditioned on ``accept(x)``, by rejection."""
    for _ in range(MAX_REJECTIONS):
        x = ball(rng, radius, dim)
        if accept(x):
            return x
    raise ConfigurationError(
        f"no acceptable point found in {MAX_REJECTIONS} draws; shrink the radius")
