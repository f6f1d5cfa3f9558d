"""Truncated Taylor series with scaling and squaring."""
from __future__ import annotations

import math

import numpy as np

SCALE_TARGET = 0.5
SERIES_TOL = 1e-18
MAX_TERMS = 60


def expm_ss(M, tol: float = SERIES_TOL) -> np.ndarray:
    """exp(M) for a small dense matrix.

    Scale by ``2^-s`` so that ``||M||_1 / 2^s <= 0.5``, sum the series until
    the next term's 1-norm drops below ``tol``, then square ``s`` times.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    norm1 = float(np.max(np.sum(np.abs(M), axis=0))) if n else 0.0
    s = 0
    if norm1 > SCALE_TARGET:
        s = max(0, math.ceil(math.log2(norm1 / SCALE_TARGET)))
    A = M / (2.0 ** s)
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, MAX_TERMS):
        term = term @ A / k
        result = result + term
        if np.max(np.sum(np.abs(term), axis=0)) < tol:
            break
    for _ in range(s):
        result = result @ result
    return result
