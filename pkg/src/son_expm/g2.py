"""The exceptional group G2 as the automorphism group of the octonions,
embedded in SO(7).

Imaginary octonion units multiply as ``i_j * i_k = f_jkl i_l`` with
``f = +1`` on the cyclic orders of 123, 145, 176, 246, 257, 347, 365.
An so(7) element lies in g2 iff it satisfies 7 homogeneous linear
relations; those are solved explicitly by a 14-parameter vector ``w``.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .closed_expm import coefficients_fallback, rotation_from_roots, sigma_powers
from .errors import DomainError, NumericalFailureError
from .invariants import InvariantSet, _traces
from .skew_basis import AlgebraVector, as_algebra_vector, assemble
from .spectral_roots import RootSet, _finish, _polish

OCTONION_TRIPLES = ((1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5))
XI_TOL = 1e-10
ZETA_RANGE = (-11.0 / 18.0, -0.5)


@lru_cache(maxsize=None)
def _structure_constants():
    f = np.zeros((7, 7, 7))
    for triple in OCTONION_TRIPLES:
        i, j, k = (t - 1 for t in triple)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            f[a, b, c] = 1.0
            f[b, a, c] = -1.0
    f.setflags(write=False)
    return f


def structure_constants() -> np.ndarray:
    """Totally antisymmetric 7x7x7 table ``f_jkl`` (0-based indices)."""
    return _structure_constants()


# (w index, w partner index, v+ index, v- index, sign): with 1-based v,
#   w_a = v_p + s * v_m,   w_b = v_p - s * v_m
_W_PAIRS = (
    (1, 8, 1, 18, +1),
    (2, 9, 2, 17, -1),
    (3, 10, 3, 11, -1),
    (4, 11, 4, 10, +1),
    (5, 12, 5, 9, -1),
    (6, 13, 6, 8, +1),
    (7, 14, 7, 16, +1),
)


def embed_g2(w) -> AlgebraVector:
    """21-component so(7) vector of the g2 element with parameters ``w``."""
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.size != 14:
        raise DomainError(f"g2 has 14 parameters, got {w.size}")
    v = np.zeros(22)  # 1-based
    for a, b, p, m, s in _W_PAIRS:
        wa, wb = w[a - 1], w[b - 1]
        v[p] = 0.5 * (wa + wb)
        v[m] = s * 0.5 * (wa - wb)
    v[12] = v[5] - v[9]
    v[13] = v[6] + v[8]
    v[14] = v[11] - v[3]
    v[15] = -v[4] - v[10]
    v[19] = v[1] + v[18]
    v[20] = v[2] - v[17]
    v[21] = v[7] + v[16]
    return AlgebraVector(7, v[1:])


def g2_parameters(av) -> np.ndarray:
    """The 14 parameters ``w`` read off an so(7) vector (left inverse of
    :func:`embed_g2`; ignores the dependent components)."""
    av = as_algebra_vector(av)
    if av.n != 7:
        raise DomainError("g2 parameters need an so(7) vector")
    v = np.concatenate(([0.0], av.v))
    w = np.zeros(14)
    for a, b, p, m, s in _W_PAIRS:
        w[a - 1] = v[p] + s * v[m]
        w[b - 1] = v[p] - s * v[m]
    return w


def _derivation_lhs(T):
    f = structure_constants()
    return (np.einsum("jm,mkl->jkl", T, f)
            + np.einsum("km,mlj->jkl", T, f)
            + np.einsum("lm,mjk->jkl", T, f))


def check_algebra_constraint(av) -> float:
    """Largest violation of the infinitesimal automorphism condition over all
    343 index triples; zero iff ``av`` lies in g2."""
    av = as_algebra_vector(av)
    if av.n != 7:
        raise DomainError(f"g2 membership needs n = 7, got {av.n}")
    return float(np.max(np.abs(_derivation_lhs(assemble(av)))))


def constraint_rank(tol: float = 1e-10) -> int:
    """Rank of the 343 x 21 linear system cut out by the derivation condition."""
    cols = [_derivation_lhs(assemble(AlgebraVector(7, e))).ravel() for e in np.eye(21)]
    return int(np.linalg.matrix_rank(np.array(cols).T, tol=tol))


def check_automorphism(S) -> float:
    """``max |S S S . f - f|`` over all index triples."""
    S = np.asarray(S, dtype=float)
    if S.shape != (7, 7):
        raise DomainError(f"expected a 7x7 matrix, got {S.shape}")
    f = structure_constants()
    t = np.einsum("lo,mno->mnl", S, f)
    t = np.einsum("kn,mnl->mkl", S, t)
    t = np.einsum("jm,mkl->jkl", S, t)
    return float(np.max(np.abs(t - f)))


def g2_roots(zeta: float, delta: float | None = None) -> RootSet:
    """Roots of the so(7) cubic at ``xi = 1``, parameterized by zeta alone."""
    lo, hi = ZETA_RANGE
    if not lo - XI_TOL <= zeta <= hi + XI_TOL:
        raise NumericalFailureError(f"g2 zeta = {zeta!r} outside [-11/18, -1/2]")
    psi = math.acos(min(max(-10.0 - 18.0 * zeta, -1.0), 1.0)) / 3.0
    c, s = math.cos(psi), math.sqrt(3.0) * math.sin(psi)
    y = ((1.0 + c) / 3.0, (2.0 + s - c) / 6.0, (2.0 - s - c) / 6.0)
    eta7 = -(1.0 + 2.0 * zeta) / 12.0
    y = _polish([1.0, -1.0, 0.25, -eta7], y)
    return _finish(7, y, delta, psi=psi)


def expm_g2_details(w, delta: float | None = None):
    """``(R, invariants, roots, method)`` for the G2 element with parameters w."""
    av = embed_g2(w)
    V = float(np.linalg.norm(av.v))
    if V < 1e-14:
        return np.eye(7), None, None, "closed"
    Sigma = assemble(av) / V
    xi, zeta, _ = _traces(Sigma, 7)
    xi, zeta = float(xi), float(zeta)
    if abs(xi - 1.0) > XI_TOL:
        raise NumericalFailureError(f"embedded element has tr Sigma^4 = {xi!r}, expected 1")
    inv = InvariantSet(n=7, V=V, xi=1.0, zeta=zeta, eta7=-(1.0 + 2.0 * zeta) / 12.0)
    rs = g2_roots(zeta, delta)
    if rs.degenerate:
        R = coefficients_fallback(7, V, inv).reconstruct(sigma_powers(Sigma, 7))
        return R, inv, rs, "fallback"
    return rotation_from_roots(V, Sigma, rs.y), inv, rs, "closed"


def expm_g2(w, delta: float | None = None) -> np.ndarray:
    """G2 rotation matrix exp(J.v(w)) in SO(7)."""
    return expm_g2_details(w, delta)[0]


def g2_trace(phi2: float, phi3: float) -> float:
    """Trace of a G2 matrix from its two independent torus angles."""
    return 8.0 * math.cos(phi2 / 2) * math.cos(phi3 / 2) * math.cos((phi2 + phi3) / 2) - 1.0
