"""Multiple-quantum coherence decomposition of density matrices.

Entry (i, j) of a graded-ordered matrix belongs to coherence order
n = exc(j) - exc(i) (ket excitation minus bra excitation), so the
decomposition is a partition of the matrix entries and summing all order
components returns the original matrix exactly.  A unitary with even-parity
block structure can only move coherence between orders of equal parity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain_model import GradedBasis, assert_parity_structure

PRESENCE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CoherenceDecomposition:
    """Order-indexed components of a density matrix; orders run -N..N."""

    n_spins: int
    order_matrices: dict[int, np.ndarray]

    def component(self, n: int) -> np.ndarray:
        return self.order_matrices[n]

    def total(self) -> np.ndarray:
        return sum(self.order_matrices.values())

    def present_orders(self, tol: float = PRESENCE_TOL) -> list[int]:
        return sorted(
            n for n, m in self.order_matrices.items() if np.abs(m).max() > tol
        )


def decompose(rho: np.ndarray, basis: GradedBasis) -> CoherenceDecomposition:
    if rho.shape != (basis.dim, basis.dim):
        raise ValueError(
            f"state dim {rho.shape} does not match basis dim {basis.dim}"
        )
    exc = basis.excitations
    order_of_entry = exc[None, :] - exc[:, None]  # column minus row
    comps: dict[int, np.ndarray] = {}
    for n in range(-basis.n_spins, basis.n_spins + 1):
        comps[n] = np.where(order_of_entry == n, rho, 0.0)
    return CoherenceDecomposition(n_spins=basis.n_spins, order_matrices=comps)


@dataclass(frozen=True)
class ParityMixingReport:
    source_orders: tuple[int, ...]
    populated_orders: tuple[int, ...]
    parity_preserved: bool
    populated_norms: dict[int, float]


def parity_mixing_check(
    rho0: np.ndarray,
    w: np.ndarray,
    basis: GradedBasis,
    tol: float = PRESENCE_TOL,
) -> ParityMixingReport:
    """Evolve rho0 by w and check that coherence-order parity is preserved.

    Requires w to carry the even-parity block structure; every populated
    order of w rho0 w^dagger must differ from some source order by an even
    number.
    """
    assert_parity_structure(w, basis, tol=1e-12)
    source = decompose(rho0, basis).present_orders(tol)
    evolved = decompose(w @ rho0 @ w.conj().T, basis)
    populated = evolved.present_orders(tol)
    source_parities = {n % 2 for n in source}
    ok = all((m % 2) in source_parities for m in populated)
    norms = {n: float(np.abs(m).max()) for n, m in evolved.order_matrices.items()}
    return ParityMixingReport(
        source_orders=tuple(source),
        populated_orders=tuple(populated),
        parity_preserved=ok,
        populated_norms=norms,
    )
