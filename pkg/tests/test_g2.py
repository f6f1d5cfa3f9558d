import numpy as np
import pytest

from son_expm.closed_expm import expm_so
from son_expm.conjugacy import torus_angles
from son_expm.errors import DomainError, NumericalFailureError
from son_expm.g2 import (check_algebra_constraint, check_automorphism, constraint_rank, embed_g2,
                         expm_g2, expm_g2_details, g2_parameters, g2_roots, g2_trace,
                         structure_constants)
from son_expm.invariants import compute_invariants
from son_expm.reference_oracles import expm_taylor
from son_expm.skew_basis import AlgebraVector, assemble


def test_structure_constants():
    f = structure_constants()
    assert f[0, 1, 2] == 1 and f[1, 0, 2] == -1 and f[0, 1, 3] == 0
    assert np.array_equal(f, -np.swapaxes(f, 0, 1))
    assert np.array_equal(f, -np.swapaxes(f, 1, 2))
    assert np.count_nonzero(f) == 42
    with pytest.raises(ValueError):
        f[0, 0, 0] = 1


def _octonion_product(a, b):
    """Imaginary-octonion multiplication table applied to full octonions."""
    f = structure_constants()
    out = np.zeros(8)
    out[0] = a[0] * b[0] - a[1:] @ b[1:]
    out[1:] = a[0] * b[1:] + b[0] * a[1:] + np.einsum("j,k,jkl->l", a[1:], b[1:], f)
    return out


def test_octonions_are_a_normed_algebra(rng):
    for _ in range(20):
        a, b = rng.standard_normal(8), rng.standard_normal(8)
        assert np.linalg.norm(_octonion_product(a, b)) == pytest.approx(
            np.linalg.norm(a) * np.linalg.norm(b), rel=1e-13)


def test_embed_examples():
    assert not np.any(embed_g2(np.zeros(14)).v)
    e1 = np.zeros(14)
    e1[0] = 1
    v = embed_g2(e1).v
    assert v[0] == v[17] == 0.5 and v[18] == 1
    assert np.count_nonzero(v) == 3
    assert v @ v == pytest.approx(1.5)
    with pytest.raises(DomainError):
        embed_g2(np.zeros(13))


def test_embed_relations_and_norm(rng):
    for _ in range(100):
        w = rng.standard_normal(14)
        v = np.concatenate(([0.0], embed_g2(w).v))
        assert v[12] == v[5] - v[9] and v[13] == v[6] + v[8] and v[14] == v[11] - v[3]
        assert v[15] == -v[4] - v[10] and v[19] == v[1] + v[18]
        assert v[20] == v[2] - v[17] and v[21] == v[7] + v[16]
        assert v @ v == pytest.approx(1.5 * w[:7] @ w[:7] + 0.5 * w[7:] @ w[7:], rel=1e-12)
        assert np.allclose(g2_parameters(embed_g2(w)), w, atol=1e-15)


def test_membership(rng):
    for _ in range(50):
        assert check_algebra_constraint(embed_g2(rng.standard_normal(14))) <= 1e-13
    e1 = np.zeros(21)
    e1[0] = 1
    assert check_algebra_constraint(AlgebraVector(7, e1)) >= 0.5
    assert check_algebra_constraint(AlgebraVector(7, np.zeros(21))) == 0
    with pytest.raises(DomainError):
        check_algebra_constraint(AlgebraVector(6, np.zeros(15)))


def test_constraint_has_rank_seven():
    assert constraint_rank() == 7


def test_automorphism(rng):
    assert check_automorphism(np.eye(7)) == 0
    for _ in range(20):
        assert check_automorphism(expm_g2(rng.standard_normal(14))) <= 1e-12
    v = rng.standard_normal(21)
    assert check_automorphism(expm_so(AlgebraVector(7, v))) > 1e-3


def test_expm_g2(rng):
    assert np.array_equal(expm_g2(np.zeros(14)), np.eye(7))
    for _ in range(200):
        w = 2 * rng.standard_normal(14)
        R, inv, rs, method = expm_g2_details(w)
        av = embed_g2(w)
        assert np.linalg.norm(R - expm_taylor(av)) < 1e-10
        full = compute_invariants(av)
        assert full.xi == pytest.approx(1.0, abs=1e-12)
        assert -11 / 18 - 1e-12 <= inv.zeta <= -0.5 + 1e-12
        assert np.sum(rs.y ** 2) == pytest.approx(0.5, abs=1e-12)
        phi = torus_angles(av).phi
        assert phi[0] == pytest.approx(phi[1] + phi[2], abs=1e-9)
        assert np.trace(R) == pytest.approx(g2_trace(phi[1], phi[2]), abs=1e-9)


def test_g2_roots_boundaries():
    rs = g2_roots(-0.5)
    assert rs.roots == pytest.approx((0.5, 0.5, 0.0), abs=1e-12)
    rs = g2_roots(-11 / 18)
    assert rs.roots == pytest.approx((2 / 3, 1 / 6, 1 / 6), abs=1e-7)
    with pytest.raises(NumericalFailureError):
        g2_roots(-0.4)


def test_g2_degenerate_inputs_fall_back():
    # w1 alone: frequencies (phi2, phi3) equal, a double root
    w = np.zeros(14)
    w[0] = 1.3
    R, _, rs, method = expm_g2_details(w)
    assert method == "fallback"
    assert np.linalg.norm(R - expm_taylor(embed_g2(w))) < 1e-12
    assert check_automorphism(R) < 1e-12


def test_xi_guard(monkeypatch):
    import son_expm.g2 as g2mod

    def bad_traces(Sigma, n):
        return 1.1, -0.55, None
    monkeypatch.setattr(g2mod, "_traces", bad_traces)
    with pytest.raises(NumericalFailureError):
        expm_g2(np.ones(14))
