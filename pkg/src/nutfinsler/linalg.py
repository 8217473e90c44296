"""Small dense SPD linear algebra for 4x4 metrics, on floats and on jets."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import jets
from .exceptions import NotPositiveDefiniteError


def cholesky(matrix) -> np.ndarray:
    """Lower Cholesky factor; raises :class:`NotPositiveDefiniteError` on failure."""
    matrix = np.asarray(matrix, dtype=float)
    if not np.array_equal(matrix, matrix.T):
        # tolerate last-bit asymmetry from assembly, reject anything larger
        if np.max(np.abs(matrix - matrix.T)) > 1e-12 * max(1.0, np.max(np.abs(matrix))):
            raise NotPositiveDefiniteError("matrix is not symmetric")
        matrix = 0.5 * (matrix + matrix.T)
    try:
        return np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from None


def is_spd(matrix) -> bool:
    try:
        cholesky(matrix)
    except NotPositiveDefiniteError:
        return False
    return True


def spd_inverse(matrix) -> np.ndarray:
    lower = cholesky(matrix)
    inv_lower = np.linalg.solve(lower, np.eye(len(lower)))
    return inv_lower.T @ inv_lower


def spd_solve(matrix, rhs) -> np.ndarray:
    lower = cholesky(matrix)
    z = np.linalg.solve(lower, rhs)
    return np.linalg.solve(lower.T, z)


def generic_cholesky_solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve ``matrix @ z = rhs`` for a symmetric positive definite matrix of jets.

    Works on any entries supporting ``+ - * /`` and :func:`jets.sqrt`; only
    the lower triangle of ``matrix`` is read.
    """
    n = len(rhs)
    lower = [[None] * n for _ in range(n)]
    for j in range(n):
        acc = matrix[j][j]
        for k in range(j):
            acc = acc - lower[j][k] * lower[j][k]
        value = acc.value if isinstance(acc, jets.Jet) else acc
        if not value > 0.0:
            raise NotPositiveDefiniteError(f"non-positive pivot {value} at column {j}")
        lower[j][j] = jets.sqrt(acc)
        for i in range(j + 1, n):
            acc = matrix[i][j]
            for k in range(j):
                acc = acc - lower[i][k] * lower[j][k]
            lower[i][j] = acc / lower[j][j]
    z = [None] * n
    for i in range(n):
        acc = rhs[i]
        for k in range(i):
            acc = acc - lower[i][k] * z[k]
        z[i] = acc / lower[i][i]
    out = [None] * n
    for i in reversed(range(n)):
        acc = z[i]
        for k in range(i + 1, n):
            acc = acc - lower[k][i] * out[k]
        out[i] = acc / lower[i][i]
    return out
