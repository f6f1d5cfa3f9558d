"""Generator basis of so(n) and conversion between coefficient vectors and
antisymmetric matrices.

Generators ``J_a`` are enumerated over the pairs ``(i, j)``, ``i < j``, in
row-major order, so the strict upper triangle of ``sum_a v_a J_a`` reads
``v`` left to right, top to bottom.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ValidationError

MIN_N = 2
MAX_N = 9

# length of v -> n, for inferring the dimension from a bare coefficient list
_N_FROM_DIM = {n * (n - 1) // 2: n for n in range(MIN_N, MAX_N + 1)}


def algebra_dim(n: int) -> int:
    """Number of generators of so(n)."""
    _check_n(n)
    return n * (n - 1) // 2


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or not MIN_N <= n <= MAX_N:
        raise DomainError(f"n must be an integer in [{MIN_N}, {MAX_N}], got {n!r}")


@lru_cache(maxsize=None)
def _upper(n):
    rows, cols = np.triu_indices(n, 1)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    """Coefficients ``v`` of an so(n) element in the generator basis."""

    n: int
    v: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        v = np.array(self.v, dtype=float).reshape(-1)
        if v.size != algebra_dim(self.n):
            raise DomainError(
                f"so({self.n}) needs {algebra_dim(self.n)} coefficients, got {v.size}"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("coefficients must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "v", v)

    @classmethod
    def from_coefficients(cls, v, n: int | None = None) -> "AlgebraVector":
        """Build from a coefficient list, inferring ``n`` from its length."""
        v = np.asarray(v, dtype=float).reshape(-1)
        if n is None:
            try:
                n = _N_FROM_DIM[v.size]
            except KeyError:
                raise DomainError(
                    f"{v.size} coefficients do not match any so(n), 2 <= n <= 9"
                ) from None
        return cls(n, v)

    def __eq__(self, other):
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.v, other.v)

    def __hash__(self):
        return hash((self.n, self.v.tobytes()))

    def __mul__(self, scale):
        return AlgebraVector(self.n, self.v * float(scale))

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraVector(self.n, -self.v)

    def to_json(self) -> dict:
        return {"n": self.n, "v": self.v.tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "AlgebraVector":
        return cls.from_coefficients(doc["v"], doc.get("n"))


def as_algebra_vector(av) -> AlgebraVector:
    if isinstance(av, AlgebraVector):
        return av
    return AlgebraVector.from_coefficients(av)


def generator(n: int, a: int) -> np.ndarray:
    """Return ``J_a`` (1-based ``a``) as a dense n x n array."""
    d = algebra_dim(n)
    if not isinstance(a, (int, np.integer)) or not 1 <= a <= d:
        raise DomainError(f"generator index for so({n}) must be in [1, {d}], got {a!r}")
    rows, cols = _upper(n)
    J = np.zeros((n, n))
    J[rows[a - 1], cols[a - 1]] = 1.0
    J[cols[a - 1], rows[a - 1]] = -1.0
    return J


def assemble(av) -> np.ndarray:
    """``sum_a v_a J_a`` for an :class:`AlgebraVector` (or a bare coefficient list)."""
    av = as_algebra_vector(av)
    rows, cols = _upper(av.n)
    M = np.zeros((av.n, av.n))
    M[rows, cols] = av.v
    M[cols, rows] = -av.v
    return M


def assemble_batch(n: int, vs) -> np.ndarray:
    """Stack of matrices for an ``(N, d)`` array of coefficient rows."""
    vs = np.asarray(vs, dtype=float)
    if vs.ndim != 2 or vs.shape[1] != algebra_dim(n):
        raise DomainError(f"expected shape (N, {algebra_dim(n)}), got {vs.shape}")
    rows, cols = _upper(n)
    M = np.zeros((vs.shape[0], n, n))
    M[:, rows, cols] = vs
    M[:, cols, rows] = -vs
    return M


def decompose(M, atol: float = 1e-12) -> AlgebraVector:
    """Inverse of :func:`assemble`; reads the strict upper triangle.

    Raises :class:`ValidationError` if ``M`` is not antisymmetric to ``atol``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    _check_n(n)
    asym = float(np.max(np.abs(M + M.T)))
    if asym > atol:
        raise ValidationError(f"matrix is not antisymmetric: max |M + M^T| = {asym:.3e}")
    rows, cols = _upper(n)
    return AlgebraVector(n, M[rows, cols])


def norm(av) -> float:
    """Euclidean length V of the coefficient vector."""
    return float(np.linalg.norm(as_algebra_vector(av).v))
