"""Dense determinants for Nystrom discretizations and Toeplitz matrices."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["determinant", "log_determinant"]


def _check_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError("need a square matrix of order >= 1")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def determinant(m) -> float:
    """Determinant by LU with partial pivoting (LAPACK); sign exact."""
    a = _check_square(m)
    sign, logabs = np.linalg.slogdet(a)
    if sign == 0.0:
        return 0.0
    return float(sign * math.exp(logabs))


def log_determinant(m) -> tuple[float, float]:
    """(sign, log|det|); safe for determinants far outside double range."""
    a = _check_square(m)
    sign, logabs = np.linalg.slogdet(a)
    return float(sign), float(logabs)
