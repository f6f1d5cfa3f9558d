"""Scalar invariants of the normalized algebra element and the regions they
are confined to.

For ``Sigma = J.v / V``:

* ``xi   = tr Sigma^4``
* ``zeta = tr Sigma^6``
* ``chi  = tr Sigma^8``
* ``eta  = det Sigma = Pf(Sigma)^2`` (even n)
* ``eta7 = (1 - zeta)/6 - xi/4`` (n = 7)
* ``eta9 = 1/24 - (xi + chi)/8 + xi^2/32 - zeta/6`` (n = 9)

All region tests are written with numpy operations so they also work on
arrays of invariants (see :func:`region_mask`).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, DomainError
from .skew_basis import as_algebra_vector, assemble, assemble_batch

DEFAULT_REGION_TOL = 1e-10

# which invariants each n carries besides V
_FIELDS_FOR_N = {
    2: (),
    3: (),
    4: ("xi", "eta"),
    5: ("xi",),
    6: ("xi", "eta"),
    7: ("xi", "zeta", "eta7"),
    8: ("xi", "zeta", "eta"),
    9: ("xi", "zeta", "chi", "eta9"),
}


@dataclass(frozen=True)
class InvariantSet:
    """Invariants of one so(n) element (or, with array fields, of a batch).

    Fields that do not apply to ``n`` are ``None``.
    """

    n: int
    V: float
    xi: Optional[float] = None
    zeta: Optional[float] = None
    eta: Optional[float] = None
    chi: Optional[float] = None
    eta7: Optional[float] = None
    eta9: Optional[float] = None

    @property
    def q(self):
        """Constant term of the reduced polynomial (eta, eta7 or eta9)."""
        return {7: self.eta7, 9: self.eta9}.get(self.n, self.eta)

    def to_json(self) -> dict:
        out = {}
        for f in fields(self):
            val = getattr(self, f.name)
            if val is not None:
                out[f.name] = val.tolist() if isinstance(val, np.ndarray) else val
        return out


def from_traces(n, V, xi=None, zeta=None, chi=None, eta=None) -> InvariantSet:
    """Assemble an :class:`InvariantSet` from raw traces, filling the
    auxiliaries eta7/eta9 and dropping fields that do not apply to ``n``."""
    vals = {"xi": xi, "zeta": zeta, "chi": chi, "eta": eta}
    if n == 7:
        vals["eta7"] = (1.0 - zeta) / 6.0 - xi / 4.0
    if n == 9:
        vals["eta9"] = 1.0 / 24.0 - (xi + chi) / 8.0 + xi * xi / 32.0 - zeta / 6.0
    keep = _FIELDS_FOR_N[n]
    return InvariantSet(n=n, V=V, **{k: v for k, v in vals.items() if k in keep})


def pfaffian(M) -> float:
    """Pfaffian of an even-dimensional antisymmetric matrix.

    Skew-symmetric Gaussian elimination with partial pivoting.  Accepts a
    stack ``(..., n, n)`` and returns an array of Pfaffians in that case.
    """
    A = np.array(M, dtype=float)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise DomainError(f"expected square matrices, got shape {A.shape}")
    n = A.shape[-1]
    if n % 2:
        raise DomainError(f"Pfaffian needs even n, got {n}")
    batch = A.shape[:-2]
    A = A.reshape(-1, n, n)
    idx = np.arange(A.shape[0])
    pf = np.ones(A.shape[0])
    for k in range(0, n - 1, 2):
        # pivot: largest entry below row k in column k
        p = k + 1 + np.argmax(np.abs(A[:, k + 1:, k]), axis=1)
        swap = p != k + 1
        if np.any(swap):
            s = idx[swap]
            ps = p[swap]
            rows_a = A[s, k + 1, :].copy()
            A[s, k + 1, :] = A[s, ps, :]
            A[s, ps, :] = rows_a
            cols_a = A[s, :, k + 1].copy()
            A[s, :, k + 1] = A[s, :, ps]
            A[s, :, ps] = cols_a
            pf[swap] = -pf[swap]
        piv = A[:, k, k + 1]
        pf *= piv
        if k + 2 < n:
            nz = piv != 0.0
            tau = np.zeros((A.shape[0], n - k - 2))
            tau[nz] = A[nz, k, k + 2:] / piv[nz, None]
            col = A[:, k + 2:, k + 1]
            upd = tau[:, :, None] * col[:, None, :]
            A[:, k + 2:, k + 2:] += upd - np.swapaxes(upd, 1, 2)
    pf = pf.reshape(batch)
    return float(pf) if pf.ndim == 0 else pf


def _traces(Sigma, n):
    """tr Sigma^4, tr Sigma^6, tr Sigma^8 through symmetric products."""
    S = Sigma @ Sigma
    S = 0.5 * (S + np.swapaxes(S, -1, -2))
    xi = np.sum(S * S, axis=(-2, -1))
    zeta = chi = None
    if n >= 7:
        S2 = S @ S
        S2 = 0.5 * (S2 + np.swapaxes(S2, -1, -2))
        zeta = np.sum(S2 * S, axis=(-2, -1))
        if n >= 9:
            chi = np.sum(S2 * S2, axis=(-2, -1))
    return xi, zeta, chi


def compute_invariants(av) -> InvariantSet:
    """Invariants of ``Sigma = assemble(av) / V``.

    Raises :class:`DegenerateInputError` for the zero vector.
    """
    av = as_algebra_vector(av)
    n = av.n
    V = float(np.linalg.norm(av.v))
    if V == 0.0:
        raise DegenerateInputError("zero algebra element has no normalized direction")
    if n <= 3:
        return InvariantSet(n=n, V=V)
    Sigma = assemble(av) / V
    xi, zeta, chi = _traces(Sigma, n)
    eta = pfaffian(Sigma) ** 2 if n % 2 == 0 else None
    return from_traces(n, V, xi=float(xi),
                       zeta=None if zeta is None else float(zeta),
                       chi=None if chi is None else float(chi),
                       eta=eta)


def compute_invariants_batch(n: int, vs) -> InvariantSet:
    """Vectorized :func:`compute_invariants` over the rows of ``vs``.

    Returns an :class:`InvariantSet` whose fields are arrays.
    """
    M = assemble_batch(n, vs)
    V = np.sqrt(np.sum(np.asarray(vs, dtype=float) ** 2, axis=1))
    if np.any(V == 0.0):
        raise DegenerateInputError("zero algebra element in batch")
    if n <= 3:
        return InvariantSet(n=n, V=V)
    Sigma = M / V[:, None, None]
    xi, zeta, chi = _traces(Sigma, n)
    eta = pfaffian(Sigma) ** 2 if n % 2 == 0 else None
    return from_traces(n, V, xi=xi, zeta=zeta, chi=chi, eta=eta)


def reduced_coefficients(inv: InvariantSet) -> np.ndarray:
    """Coefficients (highest degree first) of the monic reduced polynomial in
    ``y = -x^2`` whose roots are the squared rotation frequencies."""
    n = inv.n
    if n <= 3:
        return np.array([1.0, -1.0])
    p = 0.5 - inv.xi / 4.0
    if n == 4:
        return np.array([1.0, -1.0, inv.eta])
    if n == 5:
        return np.array([1.0, -1.0, p])
    if n in (6, 7):
        return np.array([1.0, -1.0, p, -inv.q])
    b = (inv.zeta - 1.0) / 6.0 + inv.xi / 4.0
    return np.array([1.0, -1.0, p, b, inv.q])


def characteristic_coefficients(inv: InvariantSet) -> np.ndarray:
    """Coefficients (highest degree first) of det(x I - Sigma) in terms of
    the invariants: ``(-1)^m P(-x^2)``, times ``x`` for odd n."""
    red = reduced_coefficients(inv)
    m = red.size - 1
    c = np.zeros(2 * m + 1)
    for i, a in enumerate(red):
        k = m - i
        c[2 * (m - k)] = (-1) ** (m + k) * a
    if inv.n % 2:
        c = np.append(c, 0.0)
    return c


def _region_conditions(inv: InvariantSet, tol):
    """List of boolean arrays, all of which must hold."""
    n = inv.n
    if n <= 3:
        return [np.asarray(True)]
    xi = np.asarray(inv.xi, dtype=float)
    if n == 4:
        eta = np.asarray(inv.eta, dtype=float)
        return [eta >= -tol, eta <= 0.25 + tol]
    if n == 5:
        return [xi >= 1.0 - tol, xi <= 2.0 + tol]
    if n == 6:
        eta = np.asarray(inv.eta, dtype=float)
        return _cubic_region(xi, eta, tol) + [eta <= 1.0 / 27.0 + tol]
    if n == 7:
        zeta = np.asarray(inv.zeta, dtype=float)
        eta7 = np.asarray(inv.eta7, dtype=float)
        return [
            eta7 >= -tol,
            (3.0 * xi - 2.0) ** 3 - 4.0 * (4.0 - 9.0 * (xi + zeta)) ** 2 >= -tol,
            zeta >= -2.0 - tol,
            zeta <= -2.0 / 9.0 + tol,
        ]
    if n == 8:
        return _quartic_region(xi, np.asarray(inv.zeta, dtype=float),
                               np.asarray(inv.eta, dtype=float), tol)
    return [np.asarray(inv.eta9, dtype=float) >= -tol]


def _cubic_region(xi, q, tol):
    return [
        xi >= 2.0 / 3.0 - tol,
        xi <= 2.0 + tol,
        q >= -tol,
        (3.0 * xi - 2.0) ** 3 - (9.0 * xi + 108.0 * q - 10.0) ** 2 >= -tol,
    ]


def resolvent_cubic(theta, xi, zeta, q):
    """Cubic resolvent of the reduced quartic, evaluated at ``theta``."""
    return (theta ** 3 + theta ** 2 * (1.0 - 2.0 * xi)
            + theta * (5.0 / 3.0 - 64.0 * q - 4.0 * xi + xi ** 2 - 8.0 * zeta / 3.0)
            - (3.0 * xi + 4.0 * zeta - 1.0) ** 2 / 9.0)


def _quartic_region(xi, zeta, q, tol):
    rad = 192.0 * q + 8.0 * zeta + 8.0 * xi + xi ** 2 - 4.0
    root = np.sqrt(np.maximum(rad, 0.0))
    t_plus = (2.0 * xi - 1.0 + root) / 3.0
    t_minus = (2.0 * xi - 1.0 - root) / 3.0
    prod = resolvent_cubic(t_plus, xi, zeta, q) * resolvent_cubic(t_minus, xi, zeta, q)
    return [rad >= -tol, t_plus >= -tol, t_minus >= -tol, prod <= tol]


def region_mask(inv: InvariantSet, tolerance: float = DEFAULT_REGION_TOL) -> np.ndarray:
    """Elementwise region membership for array-valued invariants."""
    conds = _region_conditions(inv, tolerance)
    out = conds[0]
    for c in conds[1:]:
        out = np.logical_and(out, c)
    return out


def region_contains(inv: InvariantSet, tolerance: float = DEFAULT_REGION_TOL) -> bool:
    """True iff every inequality bounding the invariants of so(n) holds
    within the additive ``tolerance``."""
    return bool(np.all(region_mask(inv, tolerance)))


# Monte Carlo area of the (xi, eta) region for n=6 and the (xi, zeta) region
# for n=7, inside the plotting boxes.
_AREA_BOX = {
    6: ((2.0 / 3.0, 2.0), (0.0, 1.0 / 27.0)),
    7: ((2.0 / 3.0, 2.0), (-2.0, -2.0 / 9.0)),
}
_MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class AreaEstimate:
    n: int
    estimate: float
    stderr: float
    samples: int
    seed: int

    def to_json(self) -> dict:
        return {"n": self.n, "estimate": self.estimate, "stderr": self.stderr,
                "samples": self.samples, "seed": self.seed}


def _count_inside(n, seed_seq, size):
    (x0, x1), (y0, y1) = _AREA_BOX[n]
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    xi = rng.uniform(x0, x1, size)
    y = rng.uniform(y0, y1, size)
    if n == 6:
        conds = _cubic_region(xi, y, 0.0)
    else:
        eta7 = (1.0 - y) / 6.0 - xi / 4.0
        conds = _cubic_region(xi, eta7, 0.0)
    inside = np.logical_and.reduce(conds)
    return int(np.count_nonzero(inside))


def region_area_mc(n: int, samples: int = 10 ** 6, seed: int = 0,
                   workers: int = 1) -> AreaEstimate:
    """Monte Carlo area of the allowed invariant region for n = 6 or 7.

    Samples are drawn in fixed-size chunks, each from its own child of
    ``SeedSequence(seed)``, so the estimate does not depend on ``workers``.
    """
    if n not in _AREA_BOX:
        raise DomainError(f"region area is defined for n in (6, 7), got {n}")
    if samples < 10 ** 4:
        raise DomainError(f"need at least 10^4 samples, got {samples}")
    sizes = [_MC_CHUNK] * (samples // _MC_CHUNK)
    if samples % _MC_CHUNK:
        sizes.append(samples % _MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            counts = list(pool.map(lambda a: _count_inside(n, *a), zip(children, sizes)))
    else:
        counts = [_count_inside(n, c, s) for c, s in zip(children, sizes)]
    (x0, x1), (y0, y1) = _AREA_BOX[n]
    box = (x1 - x0) * (y1 - y0)
    p = sum(counts) / samples
    return AreaEstimate(n=n, estimate=box * p,
                        stderr=box * float(np.sqrt(p * (1.0 - p) / samples)),
                        samples=samples, seed=seed)


def shear_to_zeta(xi, eta):
    """Map a point of the n=6 (xi, eta) region to the n=7 (xi, zeta) region."""
    return 1.0 - 6.0 * eta - 1.5 * xi

