"""Closed-form exp(J.v) for so(2) ... so(9).

``R = sum_{k<n} c_k Sigma^k`` with ``Sigma = J.v / V``.  The coefficients
``c_k`` come from the root-sum formulas of each dimension; when the roots are
(nearly) degenerate the formulas contain removable singularities, and the
coefficients are taken instead from the first column of ``exp(V M_n)`` with
``M_n`` the Cayley-Hamilton iteration (companion) matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._series import expm_ss
from .errors import DomainError
from .invariants import InvariantSet, characteristic_coefficients, compute_invariants
from .skew_basis import as_algebra_vector, assemble
from .spectral_roots import RootSet, roots_for, so5_trig

IDENTITY_CUTOFF = 1e-14


@dataclass(frozen=True)
class CoefficientVector:
    """``R = sum_k c[k] Sigma^k``."""

    n: int
    c: np.ndarray

    def reconstruct(self, powers) -> np.ndarray:
        return np.tensordot(self.c, powers, axes=1)


@dataclass(frozen=True)
class ExpmResult:
    """Rotation matrix plus the data that produced it."""

    R: np.ndarray
    method: str
    coefficients: CoefficientVector | None
    invariants: InvariantSet | None
    roots: RootSet | None

    @property
    def degenerate(self) -> bool:
        return bool(self.roots is not None and self.roots.degenerate)


def sigma_powers(Sigma, count: int) -> np.ndarray:
    """Stack ``Sigma^0 .. Sigma^{count-1}`` by repeated multiplication."""
    n = Sigma.shape[0]
    out = np.empty((count, n, n))
    out[0] = np.eye(n)
    for k in range(1, count):
        out[k] = out[k - 1] @ Sigma
    return out


def iteration_matrix(n: int, inv: InvariantSet) -> np.ndarray:
    """Companion matrix ``M_n``: ones on the subdiagonal, last column carrying
    the negated characteristic-polynomial coefficients.

    Multiplying a coefficient vector of ``Sigma^k`` by ``M_n`` gives the one
    of ``Sigma^{k+1}``.
    """
    if inv.n != n:
        raise DomainError(f"invariants are for so({inv.n}), not so({n})")
    M = np.zeros((n, n))
    M[np.arange(1, n), np.arange(n - 1)] = 1.0
    # monic char. polynomial, highest degree first; c[n-i] multiplies x^i
    c = characteristic_coefficients(inv)
    M[:, n - 1] = -c[::-1][:n]
    return M


def coefficients_fallback(n: int, V: float, inv: InvariantSet) -> CoefficientVector:
    """First column of ``exp(V M_n)``; well defined at every degeneracy."""
    E = expm_ss(V * iteration_matrix(n, inv))
    return CoefficientVector(n, E[:, 0].copy())


def _sinc(V, s):
    """``sin(V s) / s``, equal to V at s = 0."""
    return V * np.sinc(V * s / math.pi)


def _complement_products(y):
    """Product of all roots except the j-th, without dividing by y_j."""
    m = y.size
    return np.array([np.prod(np.delete(y, j)) for j in range(m)])


def _coeffs_so4(V, y):
    # y = (1 - z, z)
    z = y[1]
    sz, s1z = math.sqrt(z), math.sqrt(1.0 - z)
    cz, c1z = math.cos(V * sz), math.cos(V * s1z)
    Sz, S1z = _sinc(V, sz), _sinc(V, s1z)
    d = 1.0 - 2.0 * z
    return np.array([
        (1.0 - z) * cz - z * c1z,
        (1.0 - z) * Sz - z * S1z,
        cz - c1z,
        Sz - S1z,
    ]) / d


def _coeffs_so5(V, xi):
    t = so5_trig(xi)
    c2, sn, cs = t["cos2"], t["sin"], t["cos"]
    sn2, cs2 = sn * sn, cs * cs
    Vs, Vc = V * sn, V * cs
    return np.array([
        1.0,
        (cs2 / sn * math.sin(Vs) - sn2 / cs * math.sin(Vc)) / c2,
        (1.0 / sn2 - 1.0 / cs2 + sn2 / cs2 * math.cos(Vc) - cs2 / sn2 * math.cos(Vs)) / c2,
        (math.sin(Vs) / sn - math.sin(Vc) / cs) / c2,
        ((1.0 - math.cos(Vs)) / sn2 - (1.0 - math.cos(Vc)) / cs2) / c2,
    ])


def _coeffs_so6(V, xi, y):
    c = np.zeros(6)
    comp = _complement_products(y)
    for j, yj in enumerate(y):
        dP = 3.0 * yj * yj - 2.0 * yj + 0.5 - xi / 4.0
        # {comp + (1 - y) S^2 + S^4} x {cos + sinc S}
        a = np.array([comp[j], 0.0, 1.0 - yj, 0.0, 1.0])
        b0, b1 = math.cos(V * math.sqrt(yj)), _sinc(V, math.sqrt(yj))
        c[:5] += b0 * a / dP
        c[1:6] += b1 * a / dP
    return c


def _coeffs_so7(V, xi, eta7, y):
    c = np.zeros(7)
    c[0] = 1.0
    p = 0.5 - xi / 4.0
    c[2] += p / eta7
    c[4] += 1.0 / eta7
    c[6] += 1.0 / eta7
    comp = _complement_products(y)
    for j, yj in enumerate(y):
        den = 7.0 * yj ** 3 - 5.0 * yj ** 2 + 0.75 * (2.0 - xi) * yj - eta7
        sy = math.sqrt(yj)
        a = np.array([comp[j], 0.0, 1.0 - yj, 0.0, 1.0])
        # {...} x {sqrt(y) sin S - cos S^2}
        c[1:6] += 2.0 * sy * math.sin(V * sy) * a / den
        c[2:7] -= 2.0 * math.cos(V * sy) * a / den
    return c


def _coeffs_so8(V, xi, zeta, y):
    c = np.zeros(8)
    comp = _complement_products(y)
    for j, yj in enumerate(y):
        dP = 4.0 * yj ** 3 - 3.0 * yj ** 2 + yj * (1.0 - xi / 2.0) + xi / 4.0 + (zeta - 1.0) / 6.0
        a = np.array([-comp[j], 0.0, xi / 4.0 - 0.5 + yj - yj * yj, 0.0, yj - 1.0, 0.0, -1.0])
        b0, b1 = math.cos(V * math.sqrt(yj)), _sinc(V, math.sqrt(yj))
        c[:7] += b0 * a / dP
        c[1:8] += b1 * a / dP
    return c


def _coeffs_so9(V, xi, zeta, eta9, y):
    c = np.zeros(9)
    c[0] = 1.0
    c[2] += ((1.0 - zeta) / 6.0 - xi / 4.0) / eta9
    c[4] += (0.5 - xi / 4.0) / eta9
    c[6] += 1.0 / eta9
    c[8] += 1.0 / eta9
    comp = _complement_products(y)
    for j, yj in enumerate(y):
        den = (9.0 * yj ** 4 - 7.0 * yj ** 3 + 1.25 * yj ** 2 * (2.0 - xi)
               + 0.25 * yj * (3.0 * xi + 2.0 * zeta - 2.0) + eta9)
        sy = math.sqrt(yj)
        a = np.array([comp[j], 0.0, 0.5 - xi / 4.0 - yj + yj * yj, 0.0, 1.0 - yj, 0.0, 1.0])
        # {...} x {cos S^2 - sqrt(y) sin S}
        c[2:9] += 2.0 * math.cos(V * sy) * a / den
        c[1:8] -= 2.0 * sy * math.sin(V * sy) * a / den
    return c


def _complement_symmetric(y):
    """Row j: elementary symmetric polynomials e_0..e_{m-1} of the roots
    other than y_j, i.e. the coefficients of prod_{k != j} (u + y_k) from
    the highest power of u down."""
    m = y.size
    out = np.empty((m, m))
    for j in range(m):
        out[j] = np.poly(-np.delete(y, j)) if m > 1 else [1.0]
    return out


def _lagrange_basis(y):
    """Row j: ``Q_j(Sigma^2) / Q_j(-y_j)`` in the Sigma^k basis (lowest power
    first, length 2m - 1), with ``Q_j(u) = prod_{k != j} (u + y_k)``.

    Built from the nodes alone, so the rows sum to e_0 for any distinct y:
    a root error shifts the interpolation nodes instead of breaking the
    partition of unity.
    """
    m = y.size
    comp = _complement_symmetric(y)
    out = np.zeros((m, 2 * m - 1))
    for j in range(m):
        out[j, ::2] = comp[j][::-1] / np.prod(np.delete(y, j) - y[j])
    return out


def _coeffs_even_lagrange(n, V, y):
    """Even n: ``R = sum_j L_j(Sigma^2) (cos(V s_j) + sin(V s_j)/s_j Sigma)``."""
    m = y.size
    c = np.zeros(n)
    for j, L in enumerate(_lagrange_basis(y)):
        sj = math.sqrt(y[j])
        c[:2 * m - 1] += math.cos(V * sj) * L
        c[1:2 * m] += _sinc(V, sj) * L
    return c


def _coeffs_odd_folded(n, V, y):
    """Odd n with the identity block folded into the root sum.

    Cayley-Hamilton turns ``1 + B / eta`` (the kernel projector) into
    ``I - sum_j Sigma^2 Q_j(Sigma^2) / (-y_j Q_j(-y_j))``, which leaves

        R = I + sum_j L_j(Sigma^2) [(1 - cos)/y_j Sigma^2 + sin/sqrt(y_j) Sigma]

    No 1/eta and no 1/y_j remain, so small roots cost no precision.
    """
    m = y.size
    c = np.zeros(n)
    c[0] = 1.0
    for j, L in enumerate(_lagrange_basis(y)):
        sj = math.sqrt(y[j])
        one_minus_cos = 2.0 * _sinc(V / 2.0, sj) ** 2
        c[2:2 * m + 1] += one_minus_cos * L
        c[1:2 * m] += _sinc(V, sj) * L
    return c


def rotation_from_roots(V: float, Sigma, y) -> np.ndarray:
    """Evaluate the root sum with matrix projectors instead of monomials.

    Same sum as ``coefficients(...).reconstruct``, but each spectral
    projector ``L_j(Sigma^2)`` is formed as a product of factors
    ``(Sigma^2 + y_k) / (y_k - y_j)`` and weighted by cos/sin values of
    size <= 1.  The monomial coefficients for large V reach 1e3 - 1e4 and
    cancel; this route avoids that loss.
    """
    n = Sigma.shape[0]
    I = np.eye(n)
    S2 = Sigma @ Sigma
    y = np.asarray(y, dtype=float)
    R = I.copy() if n % 2 else np.zeros((n, n))
    for j, yj in enumerate(y):
        P = I
        for k, yk in enumerate(y):
            if k != j:
                P = P @ (S2 + yk * I) / (yk - yj)
        sj = math.sqrt(yj)
        if n % 2:
            R += P @ (2.0 * _sinc(V / 2.0, sj) ** 2 * S2 + _sinc(V, sj) * Sigma)
        else:
            R += P @ (math.cos(V * sj) * I + _sinc(V, sj) * Sigma)
    return R


FORMS = ("lagrange", "printed")


def coefficients(n: int, V: float, inv: InvariantSet, rs: RootSet,
                 form: str = "lagrange") -> CoefficientVector:
    """Closed-form expansion coefficients on the non-degenerate branch.

    ``form="printed"`` evaluates the per-dimension formulas term by term,
    with Vieta relations substituted into the numerators and ``P'(y_j)``
    from the invariants.  The default ``"lagrange"`` writes the same sum as
    an interpolation built from the roots alone (for odd n >= 5 with the
    identity block folded in, see :func:`_coeffs_odd_folded`).  The two are
    equal in exact arithmetic; near double roots the printed form divides
    the small Vieta mismatch of the computed roots by a small ``P'``, the
    Lagrange form does not.

    Calling this with a degenerate ``rs`` is a contract violation; use
    :func:`coefficients_fallback` there.
    """
    if rs.degenerate:
        raise DomainError("degenerate roots: use coefficients_fallback")
    if form not in FORMS:
        raise DomainError(f"form must be one of {FORMS}, got {form!r}")
    y = rs.y
    if n == 2:
        c = np.array([math.cos(V), math.sin(V)])
    elif n == 3:
        c = np.array([1.0, math.sin(V), 1.0 - math.cos(V)])
    elif form == "lagrange":
        c = _coeffs_even_lagrange(n, V, y) if n % 2 == 0 else _coeffs_odd_folded(n, V, y)
    elif n == 4:
        c = _coeffs_so4(V, y)
    elif n == 5:
        c = _coeffs_so5(V, inv.xi)
    elif n == 6:
        c = _coeffs_so6(V, inv.xi, y)
    elif n == 7:
        c = _coeffs_so7(V, inv.xi, inv.eta7, y)
    elif n == 8:
        c = _coeffs_so8(V, inv.xi, inv.zeta, y)
    elif n == 9:
        c = _coeffs_so9(V, inv.xi, inv.zeta, inv.eta9, y)
    else:
        raise DomainError(f"unsupported n={n}")
    return CoefficientVector(n, c)


def expm_closed(av, delta: float | None = None, form: str = "lagrange") -> ExpmResult:
    """:func:`expm_so` with the intermediate data attached."""
    av = as_algebra_vector(av)
    n = av.n
    V = float(np.linalg.norm(av.v))
    if V < IDENTITY_CUTOFF:
        c = np.zeros(n)
        c[0] = 1.0
        return ExpmResult(np.eye(n), "closed", CoefficientVector(n, c), None, None)
    inv = compute_invariants(av)
    rs = roots_for(inv, delta)
    Sigma = assemble(av) / V
    if rs.degenerate:
        coef, method = coefficients_fallback(n, V, inv), "fallback"
        R = coef.reconstruct(sigma_powers(Sigma, n))
    else:
        coef, method = coefficients(n, V, inv, rs, form), "closed"
        if n >= 4 and form == "lagrange":
            R = rotation_from_roots(V, Sigma, rs.y)
        else:
            R = coef.reconstruct(sigma_powers(Sigma, n))
    return ExpmResult(R, method, coef, inv, rs)


def expm_so(av, delta: float | None = None) -> np.ndarray:
    """Rotation matrix ``exp(J.v)`` for an so(n) coefficient vector, n <= 9."""
    return expm_closed(av, delta).R
