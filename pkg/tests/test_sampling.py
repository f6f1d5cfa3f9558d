import numpy as np
import pytest

from son_expm.errors import DomainError
from son_expm.invariants import compute_invariants_batch, region_mask
from son_expm.sampling import ensemble, gaussian, random_rotation, sphere, with_angles


def test_deterministic():
    assert np.array_equal(gaussian(5, 10, seed=3), gaussian(5, 10, seed=3))
    assert not np.array_equal(gaussian(5, 10, seed=3), gaussian(5, 10, seed=4))
    assert np.array_equal(ensemble(7, 10, seed=1), ensemble(7, 10, seed=1))


def test_sphere_norm():
    v = sphere(8, 1000, seed=0, radius=np.pi)
    assert np.allclose(np.linalg.norm(v, axis=1), np.pi, atol=1e-12, rtol=0)


def test_ensemble_radius_range():
    r = np.linalg.norm(ensemble(6, 5000, seed=0), axis=1)
    assert r.min() > 0 and r.max() <= 4 * np.pi + 1e-12
    assert r.max() > 3.9 * np.pi


def test_gaussian_n6_in_region():
    inv = compute_invariants_batch(6, gaussian(6, 100_000, seed=11))
    assert np.all(region_mask(inv, 1e-10))


def test_random_rotation(rng):
    Q = random_rotation(7, rng)
    assert np.allclose(Q.T @ Q, np.eye(7), atol=1e-13)
    assert np.linalg.det(Q) == pytest.approx(1.0)


def test_with_angles_errors():
    with pytest.raises(DomainError):
        with_angles(5, [1, 2, 3])
