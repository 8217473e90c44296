"""Truncated multivariate Taylor jets.

A :class:`Jet` carries every mixed partial derivative of a scalar quantity
up to a fixed total order with respect to a small set of seed variables.
Coefficients are stored as the partial derivatives themselves (Taylor
coefficient times ``alpha!``), indexed by a graded-lexicographic table of
multi-indices, so reading off ``d^3 f / dx0 dx1^2`` is a lookup.

Example
-------
>>> cfg = JetConfig(num_vars=2, max_order=2)
>>> x, y = seed([3.0, 1.0], cfg)
>>> f = x * x * y
>>> f.extract((1, 1))
6.0
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exceptions import ConfigurationError, DomainError, SingularJetError

MAX_VARS = 8
MAX_ORDER = 4


@lru_cache(maxsize=None)
def _multi_indices(num_vars: int, max_order: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for degree in range(max_order + 1):
        level = [t for t in itertools.product(range(degree + 1), repeat=num_vars)
                 if sum(t) == degree]
        out.extend(sorted(level, reverse=True))
    return tuple(out)


@dataclass(frozen=True)
class JetConfig:
    """Number of seed variables and truncation order of a jet."""

    num_vars: int
    max_order: int

    def __post_init__(self):
        if not 1 <= self.num_vars <= MAX_VARS:
            raise ConfigurationError(f"num_vars must be in 1..{MAX_VARS}, got {self.num_vars}")
        if not 0 <= self.max_order <= MAX_ORDER:
            raise ConfigurationError(f"max_order must be in 0..{MAX_ORDER}, got {self.max_order}")

    @property
    def indices(self) -> tuple[tuple[int, ...], ...]:
        return _multi_indices(self.num_vars, self.max_order)

    @property
    def size(self) -> int:
        return _tables(self).size

    def position(self, alpha: Sequence[int]) -> int:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.num_vars:
            raise ConfigurationError(
                f"multi-index {alpha} has length {len(alpha)}, expected {self.num_vars}")
        if sum(alpha) > self.max_order:
            raise ConfigurationError(
                f"multi-index {alpha} has order {sum(alpha)} > max_order {self.max_order}")
        if min(alpha) < 0:
            raise ConfigurationError(f"negative entry in multi-index {alpha}")
        return _tables(self).lookup[alpha]

    def unit(self, var: int) -> tuple[int, ...]:
        return tuple(1 if k == var else 0 for k in range(self.num_vars))

    def lower(self, by: int = 1) -> "JetConfig":
        return JetConfig(self.num_vars, self.max_order - by)


class _Tables:
    """Precomputed gather/scatter arrays for one configuration."""

    def __init__(self, cfg: JetConfig):
        idx = cfg.indices
        self.lookup = {a: k for k, a in enumerate(idx)}
        self.size = len(idx)
        n = cfg.num_vars
        self.hessian_index = None
        if cfg.max_order >= 2:
            hess = np.empty((n, n), dtype=np.intp)
            for i in range(n):
                for j in range(n):
                    alpha = [0] * n
                    alpha[i] += 1
                    alpha[j] += 1
                    hess[i, j] = self.lookup[tuple(alpha)]
            self.hessian_index = hess
        left, right, weight, target = [], [], [], []
        for k, gamma in enumerate(idx):
            for beta in itertools.product(*(range(g + 1) for g in gamma)):
                rest = tuple(g - b for g, b in zip(gamma, beta))
                w = 1.0
                for g, b in zip(gamma, beta):
                    w *= math.comb(g, b)
                left.append(self.lookup[beta])
                right.append(self.lookup[rest])
                weight.append(w)
                target.append(k)
        # target is already non-decreasing, so segment starts drive reduceat
        self.left = np.asarray(left, dtype=np.intp)
        self.right = np.asarray(right, dtype=np.intp)
        self.weight = np.asarray(weight)
        target = np.asarray(target)
        self.starts = np.flatnonzero(np.r_[True, target[1:] != target[:-1]])


@lru_cache(maxsize=None)
def _tables(cfg: JetConfig) -> _Tables:
    return _Tables(cfg)


@lru_cache(maxsize=None)
def _shift_map(cfg: JetConfig, var: int) -> np.ndarray:
    lower = cfg.lower()
    unit = cfg.unit(var)
    lookup = _tables(cfg).lookup
    return np.array([lookup[tuple(a + u for a, u in zip(alpha, unit))]
                     for alpha in lower.indices], dtype=np.intp)


@lru_cache(maxsize=None)
def _truncate_map(cfg: JetConfig, order: int) -> np.ndarray:
    target = JetConfig(cfg.num_vars, order)
    lookup = _tables(cfg).lookup
    return np.array([lookup[alpha] for alpha in target.indices], dtype=np.intp)


class Jet:
    """Immutable truncated Taylor jet. Supports ``+ - * /`` with jets and reals."""

    __slots__ = ("config", "coeffs")
    __array_priority__ = 1000

    def __init__(self, config: JetConfig, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (config.size,):
            raise ConfigurationError(
                f"expected {config.size} coefficients, got shape {coeffs.shape}")
        coeffs.flags.writeable = False
        object.__setattr__(self, "config", config)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @classmethod
    def constant(cls, value: float, config: JetConfig) -> "Jet":
        c = np.zeros(config.size)
        c[0] = value
        return cls(config, c)

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def extract(self, alpha: Sequence[int]) -> float:
        """Return the partial derivative for multi-index ``alpha``."""
        return float(self.coeffs[self.config.position(alpha)])

    def gradient(self) -> np.ndarray:
        return self.coeffs[1:1 + self.config.num_vars].copy()

    def hessian(self) -> np.ndarray:
        index = _tables(self.config).hessian_index
        if index is None:
            raise ConfigurationError("hessian needs max_order >= 2")
        return self.coeffs[index]

    def derivative(self, var: int) -> "Jet":
        """Partial derivative with respect to seed ``var``; loses one order."""
        if self.config.max_order == 0:
            raise ConfigurationError("cannot differentiate an order-0 jet")
        return Jet(self.config.lower(), self.coeffs[_shift_map(self.config, var)])

    def truncate(self, order: int) -> "Jet":
        if order > self.config.max_order:
            raise ConfigurationError(f"cannot raise order {self.config.max_order} to {order}")
        if order == self.config.max_order:
            return self
        cfg = JetConfig(self.config.num_vars, order)
        return Jet(cfg, self.coeffs[_truncate_map(self.config, order)])

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.config != self.config:
                raise ConfigurationError(
                    f"jet configs differ: {self.config} vs {other.config}")
            return other
        return Jet.constant(float(other), self.config)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.config, self.coeffs + self._coerce(other).coeffs)
        c = self.coeffs.copy()
        c[0] += other
        return Jet(self.config, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.config, -self.coeffs)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.config, self.coeffs * float(other))
        other = self._coerce(other)
        t = _tables(self.config)
        prod = self.coeffs.take(t.left) * other.coeffs.take(t.right)
        prod *= t.weight
        return Jet(self.config, np.add.reduceat(prod, t.starts))

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        c = self.value
        if c == 0.0:
            raise SingularJetError("division by a jet with zero constant term")
        k = np.arange(self.config.max_order + 1)
        return self._compose((-1.0) ** k / c ** (k + 1))

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * self._coerce(other).reciprocal()
        if other == 0:
            raise SingularJetError("division by zero")
        return Jet(self.config, self.coeffs / float(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * float(other)

    def __pow__(self, power: int):
        if not isinstance(power, int) or power < 0:
            raise ConfigurationError("only non-negative integer powers are supported")
        result = Jet.constant(1.0, self.config)
        for _ in range(power):
            result = result * self
        return result

    def _compose(self, series) -> "Jet":
        """Evaluate ``sum_k series[k] * h**k`` with ``h = self - value`` by Horner."""
        c = self.coeffs.copy()
        c[0] = 0.0
        h = Jet(self.config, c)
        result = Jet.constant(series[-1], self.config)
        for coef in series[-2::-1]:
            result = result * h + coef
        return result

    def sqrt(self) -> "Jet":
        c = self.value
        if c <= 0.0:
            raise DomainError(f"sqrt of jet with non-positive value {c}")
        series = []
        coef = 1.0
        for k in range(self.config.max_order + 1):
            # binom(1/2, k) * c**(1/2 - k)
            series.append(coef * c ** (0.5 - k))
            coef *= (0.5 - k) / (k + 1)
        return self._compose(series)

    def sin(self) -> "Jet":
        c = self.value
        cycle = (math.sin(c), math.cos(c), -math.sin(c), -math.cos(c))
        return self._compose([cycle[k % 4] / math.factorial(k)
                              for k in range(self.config.max_order + 1)])

    def cos(self) -> "Jet":
        c = self.value
        cycle = (math.cos(c), -math.sin(c), -math.cos(c), math.sin(c))
        return self._compose([cycle[k % 4] / math.factorial(k)
                              for k in range(self.config.max_order + 1)])

    def __repr__(self):
        return f"Jet(value={self.value!r}, order={self.config.max_order}, vars={self.config.num_vars})"


def seed(point: Sequence[float], config: JetConfig, active_order: int | None = None) -> list[Jet]:
    """One jet per coordinate: value ``point[i]``, unit derivative along seed ``i``.

    ``active_order`` optionally overrides ``config.max_order``.
    """
    if active_order is not None and active_order != config.max_order:
        config = JetConfig(config.num_vars, active_order)
    point = list(point)
    if len(point) != config.num_vars:
        raise ConfigurationError(
            f"point has {len(point)} coordinates, config expects {config.num_vars}")
    jets = []
    for i, v in enumerate(point):
        c = np.zeros(config.size)
        c[0] = v
        if config.max_order >= 1:
            c[1 + i] = 1.0
        jets.append(Jet(config, c))
    return jets


def sqrt(u):
    return u.sqrt() if isinstance(u, Jet) else math.sqrt(u)


def sin(u):
    return u.sin() if isinstance(u, Jet) else math.sin(u)


def cos(u):
    return u.cos() if isinstance(u, Jet) else math.cos(u)


def extract(jet: Jet, alpha: Sequence[int]) -> float:
    return jet.extract(alpha)
