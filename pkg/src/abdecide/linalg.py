"""Symmetric positive-definite solves with escalating ridge repair."""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

# Successive ridge scales (relative to mean diagonal) tried before giving up.
_JITTERS = (0.0, 1e-12, 1e-10, 1e-8)


class SingularMatrixError(np.linalg.LinAlgError):
    """Matrix not positive definite even after ridge repair."""


def cho_factor_pd(matrix: np.ndarray, what: str = "matrix"):
    """Cholesky-factor a symmetric matrix, adding tiny ridge if needed.

    Returns (factor, repaired_matrix). Raises SingularMatrixError when the
    matrix stays indefinite beyond the largest allowed jitter.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    scale = float(np.trace(matrix)) / n
    if scale <= 0.0:
        raise SingularMatrixError(f"{what} has nonpositive trace, cannot repair")
    for jitter in _JITTERS:
        candidate = matrix + jitter * scale * np.eye(n) if jitter else matrix
        try:
            return sla.cho_factor(candidate, lower=True), candidate
        except np.linalg.LinAlgError:
            continue
    raise SingularMatrixError(f"{what} is singular beyond jitter repair")


def pd_solve(matrix: np.ndarray, rhs: np.ndarray, what: str = "matrix") -> np.ndarray:
    factor, _ = cho_factor_pd(matrix, what)
    return sla.cho_solve(factor, rhs)


def pd_inverse(matrix: np.ndarray, what: str = "matrix") -> np.ndarray:
    inv = pd_solve(matrix, np.eye(matrix.shape[0]), what)
    return (inv + inv.T) / 2.0


def symmetrize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.T) / 2.0
