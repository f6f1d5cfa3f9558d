"""Maximal-torus angles ``phi_j = V sqrt(y_j)`` and the trace identities."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .invariants import compute_invariants
from .skew_basis import as_algebra_vector
from .spectral_roots import roots_for


@dataclass(frozen=True)
class TorusAngles:
    """Descending rotation angles of the conjugacy class of exp(J.v).

    Angles are not reduced mod 2 pi; ``sum(phi**2) == V**2``.
    """

    n: int
    V: float
    phi: tuple

    def folded(self) -> tuple:
        return tuple(math.fmod(p, 2.0 * math.pi) for p in self.phi)

    def to_json(self, fold: bool = False) -> dict:
        return {"n": self.n, "V": self.V,
                "phi": list(self.folded() if fold else self.phi)}


def torus_angles(av, delta: float | None = None) -> TorusAngles:
    av = as_algebra_vector(av)
    m = av.n // 2
    V = float(np.linalg.norm(av.v))
    if V == 0.0:
        return TorusAngles(av.n, 0.0, (0.0,) * m)
    rs = roots_for(compute_invariants(av), delta)
    return TorusAngles(av.n, V, tuple(V * math.sqrt(y) for y in rs.roots))


def trace_from_angles(n: int, phi) -> float:
    """``2 sum cos(phi_j)``, plus 1 for odd n."""
    t = 2.0 * float(np.sum(np.cos(np.asarray(phi, dtype=float))))
    return t + 1.0 if n % 2 else t


def trace_closed_form(av, delta: float | None = None) -> float:
    """Trace of exp(J.v) from the torus angles alone."""
    ta = torus_angles(av, delta)
    return trace_from_angles(ta.n, ta.phi)
