import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from son_expm.errors import InvariantViolationError, NumericalFailureError
from son_expm.invariants import compute_invariants, from_traces
from son_expm.sampling import with_angles
from son_expm.skew_basis import AlgebraVector, algebra_dim
from son_expm.spectral_roots import (DELTA_ENV, RootSet, degeneracy_classify, default_delta,
                                     residuals, roots_cubic_trig, roots_for,
                                     roots_quartic_resolvent, roots_so4, roots_so5)


def test_so4_examples():
    assert roots_so4(0.0).roots == (1.0, 0.0)
    rs = roots_so4(0.25)
    assert rs.roots == (0.5, 0.5) and rs.degenerate
    rs = roots_so4(3 / 16)
    assert rs.roots == pytest.approx((0.75, 0.25), abs=1e-15)
    assert not rs.degenerate
    with pytest.raises(InvariantViolationError):
        roots_so4(0.3)


def test_so5_examples():
    rs = roots_so5(2.0)
    assert rs.theta == 0.0 and rs.roots == (1.0, 0.0)
    rs = roots_so5(1.0)
    assert rs.theta == pytest.approx(math.pi / 4)
    assert rs.roots == pytest.approx((0.5, 0.5)) and rs.degenerate
    rs = roots_so5(1.5)
    assert rs.theta == pytest.approx(math.pi / 8, abs=1e-15)
    assert rs.roots == pytest.approx((math.cos(math.pi / 8) ** 2, math.sin(math.pi / 8) ** 2), abs=1e-15)
    with pytest.raises(InvariantViolationError):
        roots_so5(0.9)


def test_cubic_examples():
    rs = roots_cubic_trig(2 / 3, 1 / 27)
    assert rs.roots == pytest.approx((1 / 3,) * 3, abs=1e-9) and rs.degenerate
    rs = roots_cubic_trig(2.0, 0.0)
    assert rs.roots == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)
    # at xi = 1 the constant term is capped at 1/54 (roots 2/3, 1/6, 1/6)
    for q in (0.0, 0.005, 0.015, 1 / 54):
        rs = roots_cubic_trig(1.0, q, n=7)
        assert np.sum(rs.y ** 2) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(InvariantViolationError):
        roots_cubic_trig(1.0, 1 / 12, n=7)
    with pytest.raises(InvariantViolationError):
        roots_cubic_trig(0.5, 0.01)
    with pytest.raises(InvariantViolationError):
        roots_cubic_trig(1.0, 0.2)


def test_quartic_examples():
    rs = roots_quartic_resolvent(0.5, -0.125, 1 / 256)
    assert rs.roots == pytest.approx((0.25,) * 4, abs=1e-9) and rs.degenerate
    with pytest.raises((InvariantViolationError, NumericalFailureError)):
        roots_quartic_resolvent(0.5, -0.125, 0.05)


def test_quartic_sign_rule_contrapositive():
    # 3 xi + 4 zeta < 1: all square roots positive
    y = np.array([0.85, 0.06, 0.05, 0.04])
    xi, zeta = 2 * np.sum(y ** 2), -2 * np.sum(y ** 3)
    assert 3 * xi + 4 * zeta < 1
    rs = roots_quartic_resolvent(xi, zeta, np.prod(y))
    assert rs.extras["negated"] is None
    assert rs.roots == pytest.approx(tuple(y), abs=1e-12)


def test_quartic_negated_branch():
    y = np.array([0.3, 0.3, 0.3, 0.1]) + np.array([0.02, 0, -0.02, 0])
    xi, zeta = 2 * np.sum(y ** 2), -2 * np.sum(y ** 3)
    assert 3 * xi + 4 * zeta > 1
    rs = roots_quartic_resolvent(xi, zeta, np.prod(y))
    assert rs.extras["negated"] is not None
    assert rs.roots == pytest.approx(tuple(np.sort(y)[::-1]), abs=1e-10)


@pytest.mark.parametrize("n", range(4, 10))
def test_vieta_random(n, rng):
    for _ in range(200):
        inv = compute_invariants(AlgebraVector(n, rng.standard_normal(algebra_dim(n))))
        rs = roots_for(inv)
        y = rs.y
        assert np.sum(y) == pytest.approx(1.0, abs=1e-10)
        assert np.sum(y ** 2) == pytest.approx(inv.xi / 2, abs=1e-10)
        if n >= 6:
            assert np.prod(y) == pytest.approx(inv.q, abs=1e-10)
        assert np.max(residuals(inv, rs)) < 1e-12
        assert list(rs.roots) == sorted(rs.roots, reverse=True)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 9), st.lists(st.floats(0.05, 3.0), min_size=4, max_size=4))
def test_roots_recover_torus(n, phis):
    phi = np.array(phis[: n // 2])
    rs = roots_for(compute_invariants(with_angles(n, phi, seed=1)))
    expected = np.sort(phi ** 2 / np.sum(phi ** 2))[::-1]
    # clustered roots are ill-conditioned (error ~ eps^(1/k) for a k-fold root)
    assert np.allclose(rs.y, expected, atol=1e-3 if rs.degenerate else 1e-8)


def test_roots_continuous_in_invariants():
    a = roots_cubic_trig(1.0, 0.01)
    b = roots_cubic_trig(1.0, 0.01 + 1e-9)
    assert np.max(np.abs(a.y - b.y)) < 1e-7


def test_classify_examples():
    assert degeneracy_classify(RootSet(4, (0.5, 0.5)), 1e-5).degenerate
    assert degeneracy_classify(RootSet(4, (1.0, 0.0)), 1e-5).degenerate
    assert not degeneracy_classify(RootSet(6, (0.6, 0.3, 0.1)), 1e-5).degenerate


def test_env_threshold(monkeypatch):
    monkeypatch.setenv(DELTA_ENV, "0.2")
    assert default_delta() == 0.2
    assert roots_cubic_trig(*_xi_q((0.6, 0.3, 0.1))).degenerate
    monkeypatch.delenv(DELTA_ENV)
    assert not roots_cubic_trig(*_xi_q((0.6, 0.3, 0.1))).degenerate


def _xi_q(y):
    y = np.array(y)
    return 2 * np.sum(y ** 2), np.prod(y)


def test_roots_json():
    doc = roots_for(from_traces(6, 1.0, xi=1.0, eta=0.01)).to_json()
    assert set(doc) >= {"n", "roots", "psi", "degenerate"}
