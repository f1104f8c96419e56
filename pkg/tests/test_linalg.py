"""Dense Hermitian eigendecomposition and spectral time evolution.

The propagator is validated against an independent scaling-and-squaring
Taylor exponential so no test depends on the eigensolver being right.
"""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringstar.errors import ValidationError
from ringstar.linalg import (
    EigenSystem,
    hermitian_eigendecompose,
    kron,
    max_entry_norm,
    unitary_evolve,
)


def taylor_expm(matrix: np.ndarray) -> np.ndarray:
    """exp(M) by 12th-order Taylor after scaling by a power of two."""
    norm = max(np.abs(matrix).sum(axis=1).max(), 1e-300)
    squarings = max(int(np.ceil(np.log2(norm))) + 1, 0)
    scaled = matrix / (2.0**squarings)
    out = np.eye(matrix.shape[0], dtype=np.complex128)
    term = np.eye(matrix.shape[0], dtype=np.complex128)
    for order in range(1, 13):
        term = term @ scaled / order
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (raw + raw.conj().T) / 2.0


def test_known_two_by_two():
    h = np.array([[0.0, 0.5], [0.5, 0.0]])
    eig = hermitian_eigendecompose(h)
    assert np.allclose(eig.values, [-0.5, 0.5], atol=1e-15)


def test_reconstruct_round_trip_dim_256():
    rng = np.random.default_rng(7)
    h = random_hermitian(rng, 256)
    eig = hermitian_eigendecompose(h)
    assert np.all(np.diff(eig.values) >= 0.0)
    assert np.abs(eig.reconstruct() - h).max() < 1e-11 * max_entry_norm(h) * 256


def test_rejects_non_square():
    with pytest.raises(ValidationError):
        hermitian_eigendecompose(np.zeros((2, 3)))


def test_rejects_non_finite():
    h = np.array([[np.nan, 0.0], [0.0, 1.0]])
    with pytest.raises(ValidationError):
        hermitian_eigendecompose(h)


def test_rejects_non_hermitian():
    h = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValidationError):
        hermitian_eigendecompose(h)


def test_hermiticity_tolerance_is_relative():
    # asymmetry far below 1e-12 of the largest entry must be accepted
    h = np.array([[1e6, 1.0 + 1e-9], [1.0, -1e6]])
    hermitian_eigendecompose(h)
    with pytest.raises(ValidationError):
        hermitian_eigendecompose(np.array([[1.0, 1e-6], [0.0, -1.0]]))


@pytest.mark.parametrize("dim", [2, 3, 5, 8])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_evolution_matches_taylor_exponential(dim, seed):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, dim)
    state = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    state /= np.linalg.norm(state)
    for t in (0.0, 0.37, 2.0, -1.4):
        direct = taylor_expm(-1j * t * h) @ state
        spectral = unitary_evolve(h, t, state)
        assert np.abs(direct - spectral).max() < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=10**6),
       st.floats(min_value=-5.0, max_value=5.0, allow_nan=False))
def test_evolution_preserves_norm(dim, seed, t):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, dim)
    state = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    state /= np.linalg.norm(state)
    out = unitary_evolve(h, t, state)
    assert abs(np.linalg.norm(out) - 1.0) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6),
       st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
       st.floats(min_value=-3.0, max_value=3.0, allow_nan=False))
def test_evolution_group_law(seed, t1, t2):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, 4)
    state = rng.normal(size=4) + 1j * rng.normal(size=4)
    state /= np.linalg.norm(state)
    once = unitary_evolve(h, t1 + t2, state)
    twice = unitary_evolve(h, t2, unitary_evolve(h, t1, state))
    assert np.abs(once - twice).max() < 1e-11


def test_evolution_conserves_energy():
    rng = np.random.default_rng(11)
    h = random_hermitian(rng, 6)
    state = rng.normal(size=6) + 1j * rng.normal(size=6)
    state /= np.linalg.norm(state)
    before = np.vdot(state, h @ state).real
    after_state = unitary_evolve(h, 1.7, state)
    after = np.vdot(after_state, h @ after_state).real
    assert abs(before - after) < 1e-12


def test_kron_matches_numpy_and_validates():
    a = np.arange(4.0).reshape(2, 2)
    b = np.eye(3)
    assert np.array_equal(kron(a, b), np.kron(a, b))
    with pytest.raises(ValidationError):
        kron(np.zeros(3), b)


def test_eigensystem_is_plain_data():
    eig = EigenSystem(values=np.array([1.0]), vectors=np.eye(1))
    assert eig.values[0] == 1.0
