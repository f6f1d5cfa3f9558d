"""Independent references for the closed-form exponential.

* :func:`expm_taylor_ss` works on the dense n x n matrix and knows nothing
  about invariants or roots.
* :func:`coefficients_oracle` runs the same series on the companion matrix
  ``M_n`` and so exercises the Cayley-Hamilton recursion directly.
"""
from __future__ import annotations

import numpy as np

from ._series import SERIES_TOL, expm_ss
from .closed_expm import CoefficientVector, iteration_matrix, sigma_powers
from .errors import DomainError
from .invariants import InvariantSet, compute_invariants
from .skew_basis import as_algebra_vector, assemble

MAX_ORACLE_SIZE = 16


def expm_taylor_ss(M, tol: float = SERIES_TOL) -> np.ndarray:
    """exp(M) by scaling and squaring of the truncated Taylor series."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] > MAX_ORACLE_SIZE:
        raise DomainError(f"expected a square matrix of size <= {MAX_ORACLE_SIZE}")
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix entries must be finite")
    return expm_ss(M, tol)


def coefficients_oracle(n: int, V: float, inv: InvariantSet) -> CoefficientVector:
    """First column of ``exp(V M_n)``."""
    return CoefficientVector(n, expm_taylor_ss(V * iteration_matrix(n, inv))[:, 0].copy())


def expm_companion(av) -> np.ndarray:
    """exp(J.v) rebuilt as ``sum_k c_k Sigma^k`` from :func:`coefficients_oracle`."""
    av = as_algebra_vector(av)
    V = float(np.linalg.norm(av.v))
    if V == 0.0:
        return np.eye(av.n)
    inv = compute_invariants(av)
    c = coefficients_oracle(av.n, V, inv)
    return c.reconstruct(sigma_powers(assemble(av) / V, av.n))


def expm_taylor(av) -> np.ndarray:
    """exp(J.v) by :func:`expm_taylor_ss` on the assembled matrix."""
    return expm_taylor_ss(assemble(as_algebra_vector(av)))
