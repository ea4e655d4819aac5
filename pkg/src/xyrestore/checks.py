"""Matrix property checks shared across the package.

Density matrices, unitaries and Hermitian operators are plain complex
ndarrays; the guarantees travel as explicit checks at module boundaries
rather than as types.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


def hermiticity_defect(mat: np.ndarray) -> float:
    return float(np.abs(mat - mat.conj().T).max())


def unitarity_defect(mat: np.ndarray) -> float:
    eye = np.eye(mat.shape[0])
    return float(np.abs(mat.conj().T @ mat - eye).max())


def assert_hermitian(mat: np.ndarray, tol: float = HERMITIAN_TOL, what: str = "matrix") -> None:
    d = hermiticity_defect(mat)
    if d > tol:
        raise ValueError(f"{what} is not Hermitian: defect {d:.3e} > {tol:.1e}")


def assert_unitary(mat: np.ndarray, tol: float = UNITARY_TOL, what: str = "matrix") -> None:
    d = unitarity_defect(mat)
    if d > tol:
        raise ValueError(f"{what} is not unitary: defect {d:.3e} > {tol:.1e}")


def assert_density(mat: np.ndarray, what: str = "state") -> None:
    """Hermitian within 1e-12, unit trace within 1e-12, eigenvalues >= -1e-10."""
    assert_hermitian(mat, HERMITIAN_TOL, what)
    tr = complex(np.trace(mat))
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"{what} has trace {tr}, expected 1 within {TRACE_TOL:.1e}")
    w = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    if w.min() < -PSD_TOL:
        raise ValueError(
            f"{what} is not positive semidefinite: min eigenvalue {w.min():.3e}"
        )
