"""Dense complex linear algebra: Hermitian eigendecomposition, spectral time
evolution, Kronecker products.

Tolerances are hybrids scaled by the max-entry norm of the matrix so the same
checks serve microscopic Hamiltonians (entries ~ exchange strength) and
effective star models (entries ~ coupling strength) without per-call tuning.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HERMITICITY_RTOL = 1e-12


def max_entry_norm(matrix: np.ndarray) -> float:
    """Largest absolute entry; the scale used by relative tolerances."""
    if matrix.size == 0:
        return 0.0
    return float(np.abs(matrix).max())


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition of a Hermitian matrix.

    values are real and ascending; vectors[:, k] is the unit eigenvector for
    values[k], and the columns are mutually orthonormal.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.values) @ v.conj().T


def _as_square(matrix, name: str = "matrix") -> np.ndarray:
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValidationError(f"{name} contains non-finite entries")
    return a


def hermitian_eigendecompose(matrix) -> EigenSystem:
    """Eigendecompose a Hermitian matrix.

    The input must be Hermitian within a relative tolerance of 1e-12 on the
    max-entry norm; asymmetry beyond that is an input error, not something to
    silently symmetrize away.
    """
    a = _as_square(matrix)
    scale = max(max_entry_norm(a), 1e-300)
    asym = max_entry_norm(a - a.conj().T)
    if asym > HERMITICITY_RTOL * scale:
        raise ValidationError(
            f"matrix is not Hermitian: asymmetry {asym:.3e} exceeds "
            f"{HERMITICITY_RTOL:.0e} * {scale:.3e}"
        )
    values, vectors = np.linalg.eigh(a)
    return EigenSystem(values=values, vectors=vectors)


def unitary_evolve(hamiltonian, time: float, state) -> np.ndarray:
    """Apply exp(-i H t) to a state via the spectral decomposition of H."""
    h = _as_square(hamiltonian, "hamiltonian")
    v = np.asarray(state, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != h.shape[0]:
        raise ValidationError(
            f"state shape {v.shape} does not match hamiltonian dim {h.shape[0]}"
        )
    eig = hermitian_eigendecompose(h)
    phases = np.exp(-1j * eig.values * float(time))
    return eig.vectors @ (phases * (eig.vectors.conj().T @ v))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    am = np.asarray(a)
    bm = np.asarray(b)
    if am.ndim != 2 or bm.ndim != 2:
        raise ValidationError("kron expects two matrices")
    return np.kron(am, bm)
