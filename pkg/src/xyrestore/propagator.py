"""Evolution operator V(tau) = exp(-i H tau) via one-time eigendecomposition.

The fidelity scan evaluates V at thousands of time points against a single
Hamiltonian, so the spectral factorization is computed once and each V(tau)
costs two small matrix products.  Because H only couples excitation blocks
differing by 2, every V(tau) vanishes on blocks with odd n - m.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .checks import assert_hermitian


@dataclass(frozen=True, eq=False)
class EigenCache:
    """Spectral factorization h = Q diag(w) Q^dagger with w real ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True, eq=False)
class Propagator:
    tau: float
    matrix: np.ndarray
    eigen_cache: EigenCache = field(repr=False)


def diagonalize(h: np.ndarray, reconstruction_tol: float = 1e-10) -> EigenCache:
    """Diagonalize a Hermitian matrix, verifying the reconstruction."""
    assert_hermitian(h, what="hamiltonian")
    w, q = np.linalg.eigh(h)
    rebuilt = (q * w) @ q.conj().T
    defect = np.abs(rebuilt - h).max()
    if defect > reconstruction_tol:
        raise ValueError(
            f"eigendecomposition reconstruction defect {defect:.3e} "
            f"exceeds {reconstruction_tol:.1e}"
        )
    return EigenCache(eigenvalues=w, eigenvectors=q)


def evolve(cache: EigenCache, tau: float) -> Propagator:
    """V(tau) = Q diag(exp(-i w tau)) Q^dagger."""
    if not np.isfinite(tau):
        raise ValueError(f"tau must be finite, got {tau}")
    phases = np.exp(-1j * cache.eigenvalues * tau)
    q = cache.eigenvectors
    v = (q * phases) @ q.conj().T
    return Propagator(tau=float(tau), matrix=v, eigen_cache=cache)


def evolve_columns(cache: EigenCache, tau: float, cols: np.ndarray) -> np.ndarray:
    """Selected columns of V(tau) without forming the full matrix.

    Used by the fidelity scan, which only reads the columns where the
    non-sender part of the chain is in its ground state.
    """
    phases = np.exp(-1j * cache.eigenvalues * tau)
    q = cache.eigenvectors
    return (q * phases) @ q.conj().T[:, cols]
