"""Excitation-graded basis and the XY pair-flip Hamiltonian for spin-1/2 chains.

Conventions used throughout the package:

* site 1 is the most significant bit of a computational bitmask, so a ket
  printed as a bitstring reads left to right along the chain;
* ``|1>`` is the excited single-spin state; the excitation number of a basis
  state is the popcount of its bitmask;
* the graded ordering sorts the ``2**N`` bitmasks by (excitation number,
  bitmask value), which groups states into excitation blocks of size
  ``C(N, n)``.

Spin operators are ``sigma_alpha / 2``.  The nearest-neighbor coupling
``D * (IxIx - IyIy)`` reduces to the double-flip form
``(D/2) * (s+ s+ + s- s-)``: it only connects states that differ by flipping
an adjacent 00 pair to 11 or back, so it changes the excitation number by
exactly +-2 and the Hamiltonian is block-structured over the graded basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

# 2**20 is the largest dense dimension we are willing to allocate.
MAX_SITES = 20


@dataclass(frozen=True)
class ChainConfig:
    """Homogeneous chain: site count and nearest-neighbor coupling D.

    Time elsewhere in the package is the dimensionless tau = D * t; with the
    default D = 1 the propagator argument is tau itself.
    """

    n_spins: int
    coupling: float = 1.0

    def __post_init__(self) -> None:
        if self.n_spins < 2:
            raise ValueError(f"chain needs at least 2 spins, got {self.n_spins}")
        if self.coupling == 0:
            raise ValueError("coupling must be nonzero")


@dataclass(frozen=True, eq=False)
class GradedBasis:
    """Ordering of computational states grouped by excitation number.

    ``order[g]`` is the bitmask of graded index ``g``; ``inverse[mask]`` the
    graded index of a bitmask.  ``block_offsets[n]`` is the first graded index
    of the n-excitation block, whose size is ``block_sizes[n] = C(N, n)``.
    """

    n_spins: int
    order: np.ndarray
    inverse: np.ndarray
    block_offsets: tuple[int, ...]
    block_sizes: tuple[int, ...]
    excitations: np.ndarray  # popcount per graded index

    @property
    def dim(self) -> int:
        return 1 << self.n_spins

    def block_slice(self, n: int) -> slice:
        return slice(self.block_offsets[n], self.block_offsets[n] + self.block_sizes[n])

    def block_index(self, graded: int) -> tuple[int, int]:
        """Split a graded index into (excitation block, index within block)."""
        n = int(self.excitations[graded])
        return n, graded - self.block_offsets[n]

    def graded_index(self, n: int, local: int) -> int:
        return self.block_offsets[n] + local

    def to_graded(self, mat_comp: np.ndarray) -> np.ndarray:
        """Re-index a matrix from computational to graded ordering."""
        return mat_comp[np.ix_(self.order, self.order)]

    def to_computational(self, mat_graded: np.ndarray) -> np.ndarray:
        return mat_graded[np.ix_(self.inverse, self.inverse)]


def build_graded_basis(n_spins: int) -> GradedBasis:
    """Enumerate all bitmasks sorted by (excitation number, bitmask value)."""
    if n_spins < 1:
        raise ValueError(f"need at least one spin, got {n_spins}")
    if n_spins > MAX_SITES:
        raise ValueError(
            f"{n_spins} sites exceeds the dense-matrix capacity of {MAX_SITES}"
        )
    dim = 1 << n_spins
    masks = np.arange(dim, dtype=np.int64)
    pop = popcount(masks)
    order = np.lexsort((masks, pop))
    inverse = np.empty(dim, dtype=np.int64)
    inverse[order] = np.arange(dim)
    sizes = tuple(comb(n_spins, n) for n in range(n_spins + 1))
    offsets = tuple(int(x) for x in np.concatenate(([0], np.cumsum(sizes[:-1]))))
    return GradedBasis(
        n_spins=n_spins,
        order=order,
        inverse=inverse,
        block_offsets=offsets,
        block_sizes=sizes,
        excitations=pop[order],
    )


def popcount(masks: np.ndarray) -> np.ndarray:
    """Number of set bits per entry (excitation numbers of bitmasks)."""
    out = np.zeros_like(masks)
    m = masks.copy()
    while np.any(m):
        out += m & 1
        m >>= 1
    return out


def build_xy_hamiltonian(cfg: ChainConfig, basis: GradedBasis) -> np.ndarray:
    """Nearest-neighbor double-flip Hamiltonian in graded ordering.

    Element ``D/2`` between any pair of states that differ by an adjacent
    00 <-> 11 flip; exactly real symmetric by construction.
    """
    if basis.n_spins != cfg.n_spins:
        raise ValueError(
            f"basis is for {basis.n_spins} spins, config for {cfg.n_spins}"
        )
    n = cfg.n_spins
    dim = basis.dim
    h = np.zeros((dim, dim))
    half = cfg.coupling / 2.0
    for mask in range(dim):
        for site in range(1, n):  # pair (site, site+1), 1-based
            hi = 1 << (n - site)
            lo = 1 << (n - site - 1)
            pair = hi | lo
            if mask & pair == 0:  # 00 -> 11; the reverse comes by symmetry
                g1 = basis.inverse[mask]
                g2 = basis.inverse[mask | pair]
                h[g2, g1] += half
                h[g1, g2] += half
    return h


def block_max_norms(mat: np.ndarray, basis: GradedBasis) -> np.ndarray:
    """Max-norm of every (n, m) excitation block of a graded-ordered matrix."""
    nb = basis.n_spins + 1
    out = np.zeros((nb, nb))
    for n in range(nb):
        for m in range(nb):
            block = mat[basis.block_slice(n), basis.block_slice(m)]
            out[n, m] = np.abs(block).max() if block.size else 0.0
    return out


def assert_parity_structure(
    mat: np.ndarray, basis: GradedBasis, tol: float = 1e-12
) -> None:
    """Fail if any block with odd n - m exceeds ``tol`` in max-norm."""
    norms = block_max_norms(mat, basis)
    nb = basis.n_spins + 1
    for n in range(nb):
        for m in range(nb):
            if (n - m) % 2 == 1 and norms[n, m] > tol:
                raise ValueError(
                    f"block ({n},{m}) violates even-parity structure: "
                    f"max-norm {norms[n, m]:.3e} > {tol:.1e}"
                )
