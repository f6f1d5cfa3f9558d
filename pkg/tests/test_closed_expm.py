import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from son_expm.closed_expm import (coefficients, coefficients_fallback, expm_closed, expm_so,
                                  iteration_matrix)
from son_expm.errors import DomainError
from son_expm.invariants import characteristic_coefficients, compute_invariants, from_traces
from son_expm.reference_oracles import coefficients_oracle, expm_companion, expm_taylor
from son_expm.sampling import ensemble, with_angles
from son_expm.skew_basis import AlgebraVector, algebra_dim, assemble
from son_expm.spectral_roots import roots_for, roots_so4, roots_so5


def test_small_examples():
    assert np.allclose(expm_so(AlgebraVector(2, [math.pi])), -np.eye(2), atol=1e-15)
    assert np.allclose(expm_so(AlgebraVector(3, [math.pi, 0, 0])), np.diag([-1, -1, 1]), atol=1e-15)
    for n in range(2, 10):
        res = expm_closed(AlgebraVector(n, np.zeros(algebra_dim(n))))
        assert np.array_equal(res.R, np.eye(n))
        assert res.coefficients.c[0] == 1 and not np.any(res.coefficients.c[1:])


@pytest.mark.parametrize("n", range(2, 10))
def test_against_oracles(n):
    for v in ensemble(n, 100, seed=n):
        av = AlgebraVector(n, v)
        R = expm_so(av)
        assert np.linalg.norm(R - expm_taylor(av)) < 1e-9
        assert np.linalg.norm(R - expm_companion(av)) < 1e-9


def test_against_scipy(rng):
    from scipy.linalg import expm
    for n in range(2, 10):
        av = AlgebraVector(n, 2 * rng.standard_normal(algebra_dim(n)))
        assert np.linalg.norm(expm_so(av) - expm(assemble(av))) < 1e-10


def test_so4_coefficients_match_companion():
    eta = 3 / 16
    inv = from_traces(4, 1.0, xi=2 * (0.75 ** 2 + 0.25 ** 2), eta=eta)
    for V in (0.3, 2.0, 11.0):
        c = coefficients(4, V, inv, roots_so4(eta)).c
        assert np.allclose(c, coefficients_oracle(4, V, inv).c, atol=1e-10)


def test_so5_coefficients_at_zero():
    inv = from_traces(5, 0.0, xi=1.5)
    for form in ("lagrange", "printed"):
        c = coefficients(5, 0.0, inv, roots_so5(1.5), form).c
        assert np.allclose(c, [1, 0, 0, 0, 0], atol=1e-14)


@pytest.mark.parametrize("n", range(4, 10))
def test_printed_and_lagrange_forms_agree(n, rng):
    for _ in range(100):
        av = AlgebraVector(n, 4 * rng.standard_normal(algebra_dim(n)))
        inv = compute_invariants(av)
        rs = roots_for(inv)
        if rs.degenerate:
            continue
        a = coefficients(n, inv.V, inv, rs, "lagrange").c
        b = coefficients(n, inv.V, inv, rs, "printed").c
        assert np.allclose(a, b, atol=1e-8)
        assert np.allclose(a, coefficients_oracle(n, inv.V, inv).c, atol=1e-9)


def test_coefficients_contract():
    inv = from_traces(4, 1.0, xi=1.0, eta=0.25)
    with pytest.raises(DomainError):
        coefficients(4, 1.0, inv, roots_so4(0.25))
    inv = from_traces(4, 1.0, xi=1.25, eta=3 / 16)
    with pytest.raises(DomainError):
        coefficients(4, 1.0, inv, roots_so4(3 / 16), form="other")


def test_iteration_matrix_layout():
    M = iteration_matrix(4, from_traces(4, 1.0, xi=1.0, eta=0.2))
    assert np.allclose(M[:, 3], [-0.2, 0, -1, 0])
    assert np.allclose(M[[1, 2, 3], [0, 1, 2]], 1)
    inv = from_traces(8, 1.0, xi=0.7, zeta=-0.2, eta=0.001)
    M = iteration_matrix(8, inv)
    assert M[2, 7] == pytest.approx(0.7 / 4 + (-0.2 - 1) / 6)


@pytest.mark.parametrize("n", range(2, 10))
def test_iteration_matrix_char_poly(n, rng):
    inv = compute_invariants(AlgebraVector(n, rng.standard_normal(algebra_dim(n))))
    M = iteration_matrix(n, inv)
    assert np.allclose(np.poly(M), characteristic_coefficients(inv), atol=1e-9)


def test_fallback_examples():
    V = 1.7
    c = coefficients_fallback(3, V, from_traces(3, V)).c
    assert np.allclose(c, [1, math.sin(V), 1 - math.cos(V)], atol=1e-14)
    c = coefficients_fallback(2, V, from_traces(2, V)).c
    assert np.allclose(c, [math.cos(V), math.sin(V)], atol=1e-14)
    inv = from_traces(4, V, xi=1.0, eta=0.25)
    assert np.allclose(coefficients_fallback(4, 0.0, inv).c, [1, 0, 0, 0])
    res = expm_closed(AlgebraVector(4, [1, 0, 0, 0, 0, 1]))
    assert res.method == "fallback"
    assert np.linalg.norm(res.R.T @ res.R - np.eye(4)) < 1e-13


def test_degenerate_inputs_use_fallback():
    cases = [
        (4, [1.0, 1.0]), (5, [1.0, 1.0]), (5, [1.0, 0.0]), (6, [1.0, 1.0, 1.0]),
        (7, [1.0, 0.5, 0.0]), (8, [1.0, 1.0, 1.0, 1.0]), (9, [2.0, 1.0, 0.5, 0.0]),
    ]
    for n, phi in cases:
        av = with_angles(n, phi, seed=3)
        res = expm_closed(av)
        assert res.method == "fallback" and res.degenerate
        assert np.linalg.norm(res.R - expm_taylor(av)) < 1e-10


def test_continuity_across_switch_so4():
    # roots {1 - z, z} are classified degenerate once their gap 1 - 2z < delta
    delta = 1e-5
    methods = []
    for gap in (2 * delta, delta / 2):
        z = (1 - gap) / 2
        res = expm_closed(with_angles(4, 2.0 * np.sqrt([1 - z, z]), seed=0), delta=delta)
        methods.append(res.method)
    assert methods == ["closed", "fallback"]
    prev = None
    for z in 0.5 - np.linspace(0.0, 2e-5, 201):
        av = with_angles(4, 2.0 * np.sqrt([1 - z, z]), seed=0)
        R = expm_so(av, delta=delta)
        assert np.linalg.norm(R - expm_taylor(av)) < 1e-8
        if prev is not None:
            assert np.linalg.norm(R - prev) < 1e-6
        prev = R


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2 ** 31 - 1), st.floats(0.0, 4 * math.pi))
def test_group_properties(n, seed, V):
    v = np.random.default_rng(seed).standard_normal(algebra_dim(n))
    v = v * V / np.linalg.norm(v)
    av = AlgebraVector(n, v)
    R = expm_so(av)
    assert np.linalg.norm(R.T @ R - np.eye(n)) < 1e-11
    assert abs(np.linalg.det(R) - 1) < 1e-10
    # inverse is exp(-v)
    assert np.linalg.norm(expm_so(-av) @ R - np.eye(n)) < 1e-10
    # one-parameter subgroup
    a, b = AlgebraVector(n, 0.3 * v), AlgebraVector(n, 0.7 * v)
    assert np.linalg.norm(expm_so(a) @ expm_so(b) - R) < 1e-9


@pytest.mark.parametrize("n", range(4, 10))
def test_projector_and_monomial_evaluation_agree(n, rng):
    from son_expm.closed_expm import sigma_powers
    for _ in range(50):
        av = AlgebraVector(n, 3 * rng.standard_normal(algebra_dim(n)))
        res = expm_closed(av)
        Sigma = assemble(av) / res.invariants.V
        R_mono = res.coefficients.reconstruct(sigma_powers(Sigma, n))
        assert np.linalg.norm(res.R - R_mono) < 1e-9
