"""Seeded generators of so(n) coefficient vectors."""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .skew_basis import AlgebraVector, algebra_dim, decompose

FOUR_PI = 4.0 * np.pi


def gaussian(n: int, count: int, seed: int = 0) -> np.ndarray:
    """``(count, d)`` array of standard-normal components."""
    return np.random.default_rng(seed).standard_normal((count, algebra_dim(n)))


def sphere(n: int, count: int, seed: int = 0, radius: float = np.pi) -> np.ndarray:
    """Gaussian directions rescaled to norm ``radius``."""
    v = gaussian(n, count, seed)
    return v * (radius / np.linalg.norm(v, axis=1))[:, None]


def ensemble(n: int, count: int, seed: int = 0, vmax: float = FOUR_PI) -> np.ndarray:
    """Gaussian directions with norms uniform on ``(0, vmax]``."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((count, algebra_dim(n)))
    radius = vmax * (1.0 - rng.random(count))
    return v * (radius / np.linalg.norm(v, axis=1))[:, None]


def random_rotation(n: int, rng) -> np.ndarray:
    """Haar-random element of SO(n)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def with_angles(n: int, phi, seed: int | None = None) -> AlgebraVector:
    """so(n) vector whose exponential has torus angles ``phi``.

    Builds the block-diagonal generator with ``phi_j`` in the planes
    (2j-1, 2j); with ``seed`` it is conjugated by a random rotation.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.size > n // 2:
        raise DomainError(f"so({n}) has at most {n // 2} angles, got {phi.size}")
    M = np.zeros((n, n))
    for j, p in enumerate(phi):
        M[2 * j, 2 * j + 1] = p
        M[2 * j + 1, 2 * j] = -p
    if seed is not None:
        Q = random_rotation(n, np.random.default_rng(seed))
        M = Q @ M @ Q.T
        M = 0.5 * (M - M.T)
    return decompose(M)


def g2_parameters(count: int, seed: int = 0, scale: float = 1.0) -> np.ndarray:
    """``(count, 14)`` Gaussian parameter vectors for G2."""
    return scale * np.random.default_rng(seed).standard_normal((count, 14))
