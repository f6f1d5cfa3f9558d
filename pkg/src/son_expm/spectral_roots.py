"""Roots ``y_j >= 0`` of the reduced characteristic polynomial in ``y = -x^2``.

The eigenvalues of the normalized matrix are ``+-i sqrt(y_j)`` (plus a zero
for odd n).  Each family has its own closed-form solver:

* n = 4:    quadratic ``y^2 - y + eta``
* n = 5:    quadratic ``y^2 - y + 1/2 - xi/4`` through the angle theta
* n = 6, 7: cubic ``y^3 - y^2 + (1/2 - xi/4) y - q`` by angle trisection
* n = 8, 9: quartic through its cubic resolvent
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import InvariantViolationError, NumericalFailureError
from .invariants import InvariantSet, reduced_coefficients

DEFAULT_DELTA = 1e-5
DELTA_ENV = "SON_EXPM_DEG_THRESHOLD"

INPUT_TOL = 1e-10
# arccos arguments from genuine inputs drift slightly past +-1
ACOS_WINDOW = 1e-9
# rounding of the invariants is amplified by 1/denominator near multiple roots
_ROUNDING = 64 * np.finfo(float).eps
NEGATIVE_ROOT_TOL = 1e-9
QUARTIC_ROOT_FLOOR = -1e-10
QUARTIC_RESIDUAL_TOL = 1e-9


def default_delta() -> float:
    """Degeneracy threshold, overridable through ``SON_EXPM_DEG_THRESHOLD``."""
    raw = os.environ.get(DELTA_ENV)
    return float(raw) if raw else DEFAULT_DELTA


@dataclass(frozen=True)
class RootSet:
    """Descending roots of the reduced polynomial plus diagnostics.

    ``psi`` is the trisection angle for n >= 6 and ``theta`` the half-angle
    parameter for n = 5.  ``min_derivative`` is ``min_j |P'(y_j)|``, the
    conditioning of the root-sum formulas.
    """

    n: int
    roots: tuple
    psi: Optional[float] = None
    theta: Optional[float] = None
    degenerate: bool = False
    min_gap: float = math.inf
    min_root: float = math.inf
    min_derivative: float = math.inf
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def y(self) -> np.ndarray:
        return np.array(self.roots, dtype=float)

    def to_json(self) -> dict:
        return {"n": self.n, "roots": list(self.roots), "psi": self.psi,
                "theta": self.theta, "degenerate": self.degenerate,
                "min_gap": _finite_or_none(self.min_gap),
                "min_root": self.min_root,
                "min_derivative": _finite_or_none(self.min_derivative)}


def _finite_or_none(x):
    return x if math.isfinite(x) else None


def degeneracy_classify(rs: RootSet, delta: float | None = None) -> RootSet:
    """Fill the degeneracy diagnostics of ``rs``.

    Degenerate when two roots are closer than ``delta``, a root is below
    ``delta``, or some ``|P'(y_j)|`` is below ``delta`` (clustered triple or
    quadruple roots, where the root-sum formulas lose ~|log10 P'| digits).
    """
    if delta is None:
        delta = default_delta()
    y = np.asarray(rs.roots, dtype=float)
    min_root = float(y.min())
    if y.size > 1:
        diff = y[:, None] - y[None, :]
        np.fill_diagonal(diff, 1.0)
        min_gap = float(np.min(np.abs(diff[np.triu_indices(y.size, 1)])))
        min_der = float(np.min(np.abs(np.prod(diff, axis=1))))
    else:
        min_gap = min_der = math.inf
    degenerate = min_gap < delta or min_root < delta or min_der < delta
    return replace(rs, degenerate=degenerate, min_gap=min_gap,
                   min_root=min_root, min_derivative=min_der)


def _polish(coeffs, y, steps=2):
    """Newton steps on the reduced polynomial.

    Square roots of small resolvent values (and arccos near +-1) lose
    digits that Newton recovers at simple roots; a step is kept only if it
    does not increase the residual.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    dcoeffs = np.polyder(coeffs)
    y = np.array(y, dtype=float)
    for _ in range(steps):
        p = np.polyval(coeffs, y)
        dp = np.polyval(dcoeffs, y)
        ok = np.abs(dp) > 1e-8
        trial = y.copy()
        trial[ok] -= p[ok] / dp[ok]
        better = np.abs(np.polyval(coeffs, trial)) <= np.abs(p)
        y = np.where(better, trial, y)
    return y


def _finish(n, roots, delta, **kw):
    y = np.sort(np.asarray(roots, dtype=float))[::-1]
    if y[-1] < -NEGATIVE_ROOT_TOL:
        raise InvariantViolationError(f"negative root {y[-1]:.3e} for so({n})")
    y = np.maximum(y, 0.0)
    return degeneracy_classify(RootSet(n=n, roots=tuple(float(t) for t in y), **kw), delta)


def roots_trivial(n: int) -> RootSet:
    """n = 2, 3: the single frequency is the norm itself."""
    return RootSet(n=n, roots=(1.0,), min_root=1.0)


def roots_so4(eta: float, delta: float | None = None) -> RootSet:
    """Roots ``{1 - z, z}`` with ``eta = z (1 - z)``, ``0 <= z <= 1/2``."""
    if not -INPUT_TOL <= eta <= 0.25 + INPUT_TOL:
        raise InvariantViolationError(f"so(4) needs 0 <= eta <= 1/4, got {eta!r}")
    disc = max(1.0 - 4.0 * eta, 0.0)
    # 2 eta / (1 + sqrt(disc)) avoids the cancellation in (1 - sqrt(disc)) / 2
    z = min(max(2.0 * eta / (1.0 + math.sqrt(disc)), 0.0), 0.5)
    return _finish(4, (1.0 - z, z), delta)


def so5_trig(xi: float) -> dict:
    """cos 2theta, sin theta, cos theta for ``xi = 1 + cos^2 2theta``."""
    c2 = math.sqrt(min(max(xi - 1.0, 0.0), 1.0))
    return {
        "cos2": c2,
        "sin": math.sqrt((1.0 - c2) / 2.0),
        "cos": math.sqrt((1.0 + c2) / 2.0),
    }


def roots_so5(xi: float, delta: float | None = None) -> RootSet:
    """Roots ``{cos^2 theta, sin^2 theta}`` with
    ``theta = arccos(sqrt(xi - 1)) / 2`` in ``[0, pi/4]``."""
    if not 1.0 - INPUT_TOL <= xi <= 2.0 + INPUT_TOL:
        raise InvariantViolationError(f"so(5) needs 1 <= xi <= 2, got {xi!r}")
    t = so5_trig(xi)
    theta = 0.5 * math.acos(t["cos2"])
    return _finish(5, (t["cos"] ** 2, t["sin"] ** 2), delta, theta=theta)


def _trisect(num, den_sq, what, num_scale=1.0, den_scale=1.0):
    """``arccos(num / den_sq**1.5) / 3`` with tolerance for drift past +-1.

    ``num`` and ``den_sq`` are sums of terms whose magnitudes add up to
    ``num_scale`` and ``den_scale``; near clustered roots both cancel down
    to tiny values, so the rounding window scales with those ratios.
    """
    den = den_sq ** 1.5
    if den == 0.0:
        return 0.0
    arg = num / den
    noise = _ROUNDING * (num_scale / den + 1.5 * abs(arg) * den_scale / den_sq)
    if abs(arg) > 1.0 + ACOS_WINDOW + noise:
        raise InvariantViolationError(
            f"{what}: arccos argument {arg:.12g} outside [-1, 1]")
    return math.acos(min(max(arg, -1.0), 1.0)) / 3.0


def roots_cubic_trig(xi: float, q: float, delta: float | None = None, n: int = 6) -> RootSet:
    """Three roots of ``y^3 - y^2 + (1/2 - xi/4) y - q`` (q = eta for n = 6,
    eta7 for n = 7), solved in the irreducible case by angle trisection."""
    if q < -INPUT_TOL:
        raise InvariantViolationError(f"cubic constant term must be >= 0, got {q!r}")
    s2 = 3.0 * xi - 2.0
    if s2 < -INPUT_TOL:
        raise InvariantViolationError(f"need xi >= 2/3, got {xi!r}")
    # below rounding noise 3 xi - 2 is indistinguishable from a triple root
    if s2 <= _ROUNDING * (3.0 * abs(xi) + 2.0):
        s2 = 0.0
    psi = _trisect(9.0 * xi + 108.0 * q - 10.0, s2, "cubic",
                   9.0 * abs(xi) + 108.0 * abs(q) + 10.0, 3.0 * abs(xi) + 2.0)
    s = math.sqrt(s2)
    c, sn = math.cos(psi), math.sin(psi)
    y1 = (1.0 + s * c) / 3.0
    y2 = (2.0 + s * (math.sqrt(3.0) * sn - c)) / 6.0
    y3 = (2.0 + s * (-math.sqrt(3.0) * sn - c)) / 6.0
    y = _polish([1.0, -1.0, 0.5 - xi / 4.0, -q], (y1, y2, y3))
    return _finish(n, y, delta, psi=psi)


def _quartic_poly(y, xi, zeta, q):
    return y ** 4 - y ** 3 + y ** 2 * (0.5 - xi / 4.0) + y * ((zeta - 1.0) / 6.0 + xi / 4.0) + q


def roots_quartic_resolvent(xi: float, zeta: float, q: float,
                            delta: float | None = None, n: int = 8) -> RootSet:
    """Four roots of the reduced quartic (q = eta for n = 8, eta9 for n = 9)
    from the three roots Theta of its cubic resolvent.

    The product ``sqrt(T1) sqrt(T2) sqrt(T3)`` must equal
    ``1/3 - xi - 4 zeta/3``.  Sign assignments are tried in the order none
    negated, the smallest, each other one; among those giving nonnegative
    roots with small residuals the one matching the product best wins.
    (Near a quadruple root some Theta cancels to ~0 and the product can only
    match approximately.)
    """
    rad = 192.0 * q + 8.0 * zeta + 8.0 * xi + xi * xi - 4.0
    if rad < -INPUT_TOL:
        raise InvariantViolationError(f"resolvent radicand {rad:.3e} < 0")
    rad = max(rad, 0.0)
    num = (8.0 * (1.0 - 36.0 * q - 3.0 * zeta + 3.0 * zeta * zeta) - xi ** 3
           + 42.0 * xi * xi + 12.0 * xi * (5.0 * zeta + 48.0 * q - 3.0))
    num_scale = (8.0 * (1.0 + 36.0 * abs(q) + 3.0 * abs(zeta) + 3.0 * zeta * zeta)
                 + abs(xi) ** 3 + 42.0 * xi * xi
                 + 12.0 * abs(xi) * (5.0 * abs(zeta) + 48.0 * abs(q) + 3.0))
    rad_scale = 192.0 * abs(q) + 8.0 * abs(zeta) + 8.0 * abs(xi) + xi * xi + 4.0
    psi = _trisect(num, rad, "cubic resolvent", num_scale, rad_scale)
    r = math.sqrt(rad)
    thetas = [(2.0 * xi - 1.0 + 2.0 * r * math.cos(a)) / 3.0
              for a in (psi, psi + 2.0 * math.pi / 3.0, psi - 2.0 * math.pi / 3.0)]
    sq = np.sqrt(np.maximum(thetas, 0.0))
    target = 1.0 / 3.0 - xi - 4.0 * zeta / 3.0

    smallest = int(np.argmin(sq))
    trials = [None, smallest] + [k for k in range(3) if k != smallest]
    attempts, best = [], None
    for neg in trials:
        s = sq.copy()
        if neg is not None:
            s[neg] = -s[neg]
        s1, s2_, s3 = s
        y = np.array([1.0 + s1 + (s2_ + s3), 1.0 + s1 - (s2_ + s3),
                      1.0 - s1 + (s2_ - s3), 1.0 - s1 - (s2_ - s3)]) / 4.0
        res = np.abs(_quartic_poly(y, xi, zeta, q))
        mismatch = abs(s1 * s2_ * s3 - target)
        attempts.append({"negated": neg, "roots": y.tolist(),
                         "residuals": res.tolist(), "sign_mismatch": mismatch})
        if y.min() < QUARTIC_ROOT_FLOOR or res.max() > QUARTIC_RESIDUAL_TOL:
            continue
        if best is None or mismatch < best[0]:
            best = (mismatch, neg, y)
        if mismatch <= QUARTIC_RESIDUAL_TOL:
            break
    if best is None:
        raise NumericalFailureError(
            "no square-root sign assignment yields valid quartic roots", residuals=attempts)
    _, neg, y = best
    y = _polish([1.0, -1.0, 0.5 - xi / 4.0, (zeta - 1.0) / 6.0 + xi / 4.0, q], y)
    return _finish(n, y, delta, psi=psi, extras={"thetas": thetas, "negated": neg})


def roots_for(inv: InvariantSet, delta: float | None = None) -> RootSet:
    """Dispatch to the solver matching ``inv.n``."""
    n = inv.n
    if n <= 3:
        return roots_trivial(n)
    if n == 4:
        return roots_so4(inv.eta, delta)
    if n == 5:
        return roots_so5(inv.xi, delta)
    if n in (6, 7):
        return roots_cubic_trig(inv.xi, inv.q, delta, n=n)
    return roots_quartic_resolvent(inv.xi, inv.zeta, inv.q, delta, n=n)


def residuals(inv: InvariantSet, rs: RootSet) -> np.ndarray:
    """``|P(y_j)|`` of the reduced polynomial at each root."""
    return np.abs(np.polyval(reduced_coefficients(inv), rs.y))
