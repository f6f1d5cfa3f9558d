"""Closed-form exponentials of so(n), n = 2..9, and of the G2 subalgebra of so(7)."""
from .closed_expm import (CoefficientVector, ExpmResult, coefficients, coefficients_fallback,
                          expm_closed, expm_so, iteration_matrix)
from .conjugacy import TorusAngles, torus_angles, trace_closed_form
from .errors import (DegenerateInputError, DomainError, InvariantViolationError,
                     NumericalFailureError, SonExpmError, ValidationError)
from .g2 import (check_algebra_constraint, check_automorphism, embed_g2, expm_g2,
                 structure_constants)
from .invariants import (InvariantSet, compute_invariants, pfaffian, region_area_mc,
                         region_contains)
from .reference_oracles import coefficients_oracle, expm_companion, expm_taylor, expm_taylor_ss
from .skew_basis import AlgebraVector, algebra_dim, assemble, decompose, generator
from .spectral_roots import RootSet, degeneracy_classify, roots_for

__version__ = "0.1.0"
