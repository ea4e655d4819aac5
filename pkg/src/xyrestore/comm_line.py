"""Sender / transmission-line / receiver partition and the lambda coupling tensor.

The chain splits into the sender S (first sites), the receiver R (last
sites) and the transmission line TL in between; the extended receiver ER is
the trailing block of sites on which the restoring unitary acts (R is a
subset of ER, ER never overlaps S).

For the product initial state s (x) |0..0><0..0| evolved by a unitary W, the
receiver's reduced matrix depends linearly on s:

    r[a, b] = sum_{c,d} lambda[a, b, c, d] * s[c, d]

with, in computational indexing and t running over joint S+TL bitmasks,

    lambda[a, b, c, d] = sum_t W[(t, a), (c, 0)] * conj(W[(t, b), (d, 0)]).

Two independent builders are provided: ``lambda_tensor_direct`` evaluates
that element sum, and ``lambda_tensor_oracle`` reads the same coefficients
off full propagations of sender basis matrix units.  Their agreement is a
standing cross-check.  W couples only equal-parity excitation sectors, which
forces lambda to vanish whenever the sender order l - k and the receiver
order m - n have different parities; those entries are stored as exact
zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain_model import GradedBasis, build_graded_basis
from .checks import assert_density, assert_unitary


@dataclass(frozen=True)
class CommLayout:
    """Site partition of the chain; sender first, receiver last."""

    n_total: int
    n_sender: int
    n_receiver: int
    n_extended: int

    def __post_init__(self) -> None:
        if self.n_sender < 1:
            raise ValueError("sender needs at least one site")
        if self.n_receiver != self.n_sender:
            raise ValueError(
                f"receiver size {self.n_receiver} must equal sender size "
                f"{self.n_sender}"
            )
        if self.n_sender + self.n_receiver > self.n_total:
            raise ValueError("sender and receiver do not fit into the chain")
        if not (self.n_receiver <= self.n_extended <= self.n_total - self.n_sender):
            raise ValueError(
                f"extended receiver size {self.n_extended} must lie in "
                f"[{self.n_receiver}, {self.n_total - self.n_sender}]"
            )

    @property
    def n_tl(self) -> int:
        return self.n_total - self.n_sender - self.n_receiver

    @property
    def n_traced(self) -> int:
        """Sites traced out when reducing to the receiver (S and TL)."""
        return self.n_sender + self.n_tl

    @property
    def dim_sender(self) -> int:
        return 1 << self.n_sender

    @property
    def dim_receiver(self) -> int:
        return 1 << self.n_receiver

    @property
    def dim_extended(self) -> int:
        return 1 << self.n_extended

    @property
    def sender_sites(self) -> range:
        return range(1, self.n_sender + 1)

    @property
    def tl_sites(self) -> range:
        return range(self.n_sender + 1, self.n_sender + self.n_tl + 1)

    @property
    def receiver_sites(self) -> range:
        return range(self.n_total - self.n_receiver + 1, self.n_total + 1)

    @property
    def extended_sites(self) -> range:
        return range(self.n_total - self.n_extended + 1, self.n_total + 1)


def sender_basis(layout: CommLayout) -> GradedBasis:
    return build_graded_basis(layout.n_sender)


def receiver_basis(layout: CommLayout) -> GradedBasis:
    return build_graded_basis(layout.n_receiver)


def extended_basis(layout: CommLayout) -> GradedBasis:
    return build_graded_basis(layout.n_extended)


def sender_embedded_columns(layout: CommLayout) -> np.ndarray:
    """Full-chain computational indices of states (sender mask, 0, 0)."""
    shift = layout.n_tl + layout.n_receiver
    return np.arange(layout.dim_sender, dtype=np.int64) << shift


def embed_operator(op_s: np.ndarray, layout: CommLayout, basis: GradedBasis) -> np.ndarray:
    """op (x) |0..0><0..0| over TL and R, in full-chain graded ordering.

    ``op_s`` is indexed in the sender's graded ordering; no state checks are
    performed (the lambda oracle embeds non-Hermitian matrix units).
    """
    if op_s.shape != (layout.dim_sender, layout.dim_sender):
        raise ValueError(
            f"sender operator dim {op_s.shape} does not match layout "
            f"({layout.dim_sender})"
        )
    if basis.n_spins != layout.n_total:
        raise ValueError("basis does not match layout size")
    s_basis = sender_basis(layout)
    op_comp = s_basis.to_computational(np.asarray(op_s, dtype=complex))
    cols = sender_embedded_columns(layout)
    rho_comp = np.zeros((basis.dim, basis.dim), dtype=complex)
    rho_comp[np.ix_(cols, cols)] = op_comp
    return basis.to_graded(rho_comp)


def initial_state(s: np.ndarray, layout: CommLayout, basis: GradedBasis) -> np.ndarray:
    """Chain state with the density matrix s installed on the sender."""
    assert_density(s, what="sender state")
    return embed_operator(s, layout, basis)


def receiver_state(rho: np.ndarray, layout: CommLayout, basis: GradedBasis) -> np.ndarray:
    """Partial trace over S and TL, returned in the receiver's graded ordering."""
    if rho.shape != (basis.dim, basis.dim):
        raise ValueError(f"state dim {rho.shape} does not match basis dim {basis.dim}")
    if basis.n_spins != layout.n_total:
        raise ValueError("basis does not match layout size")
    dt = 1 << layout.n_traced
    dr = layout.dim_receiver
    rho_comp = basis.to_computational(rho).reshape(dt, dr, dt, dr)
    r_comp = np.einsum("iaib->ab", rho_comp)
    r_basis = receiver_basis(layout)
    return r_basis.to_graded(r_comp)


@dataclass(frozen=True, eq=False)
class LambdaTensor:
    """Linear map from sender to receiver density-matrix entries.

    ``map4[a, b, c, d]`` (all graded indices: a, b receiver, c, d sender)
    multiplies ``s[c, d]`` in ``r[a, b]``.  ``entry`` exposes the
    block/multi-index view lambda^{(n m k l)}_{i j it jt}.
    """

    layout: CommLayout
    map4: np.ndarray
    tau: float | None = None
    phi: np.ndarray | None = None
    basis_receiver: GradedBasis = field(repr=False, default=None)
    basis_sender: GradedBasis = field(repr=False, default=None)

    def entry(
        self, n: int, m: int, k: int, l: int, i: int, j: int, it: int, jt: int
    ) -> complex:
        a = self.basis_receiver.graded_index(n, i)
        b = self.basis_receiver.graded_index(m, j)
        c = self.basis_sender.graded_index(k, it)
        d = self.basis_sender.graded_index(l, jt)
        return complex(self.map4[a, b, c, d])

    def apply(self, s: np.ndarray) -> np.ndarray:
        """Receiver matrix for a sender matrix s (graded indexing)."""
        return np.einsum("abcd,cd->ab", self.map4, s)

    def apply_batch(self, s_batch: np.ndarray) -> np.ndarray:
        return np.einsum("abcd,ncd->nab", self.map4, s_batch)


def structural_zero_mask(layout: CommLayout) -> np.ndarray:
    """True where the coupling is forbidden by excitation-parity bookkeeping.

    Nonzero requires (sender ket order) - (receiver ket order) even:
    (exc(d) - exc(c)) - (exc(b) - exc(a)) = 0 mod 2.
    """
    exc_r = receiver_basis(layout).excitations
    exc_s = sender_basis(layout).excitations
    diff = (
        exc_s[None, None, None, :]
        - exc_s[None, None, :, None]
        - exc_r[None, :, None, None]
        + exc_r[:, None, None, None]
    )
    return diff % 2 == 1


def _gathered_columns(w: np.ndarray, layout: CommLayout, basis: GradedBasis) -> np.ndarray:
    """G[t, a, c] = W[(t, a), (c, 0)] in computational indexing of a graded W."""
    cols = sender_embedded_columns(layout)
    w_cols = w[np.ix_(basis.inverse, basis.inverse[cols])]
    dt = 1 << layout.n_traced
    return w_cols.reshape(dt, layout.dim_receiver, layout.dim_sender)


def lambda_map_from_columns(
    g: np.ndarray, layout: CommLayout
) -> np.ndarray:
    """Graded-ordered map4 from the gathered column tensor G[t, a, c]."""
    m_comp = np.einsum("tac,tbd->abcd", g, g.conj())
    order_r = receiver_basis(layout).order
    order_s = sender_basis(layout).order
    return m_comp[np.ix_(order_r, order_r, order_s, order_s)]


def lambda_tensor_direct(
    w: np.ndarray,
    layout: CommLayout,
    basis: GradedBasis,
    tau: float | None = None,
    phi: np.ndarray | None = None,
) -> LambdaTensor:
    """Coupling tensor from the matrix elements of W.

    Sums W[(t, a), (c, 0)] * conj(W[(t, b), (d, 0)]) over the traced
    multi-index t; parity-forbidden entries are stored as exact zeros.
    W must be unitary with the even-parity block structure.
    """
    assert_unitary(w, what="evolution operator")
    from .chain_model import assert_parity_structure

    assert_parity_structure(w, basis)
    g = _gathered_columns(w, layout, basis)
    map4 = lambda_map_from_columns(g, layout)
    map4[structural_zero_mask(layout)] = 0.0
    return LambdaTensor(
        layout=layout,
        map4=map4,
        tau=tau,
        phi=phi,
        basis_receiver=receiver_basis(layout),
        basis_sender=sender_basis(layout),
    )


def lambda_tensor_oracle(
    w: np.ndarray,
    layout: CommLayout,
    basis: GradedBasis,
    tau: float | None = None,
) -> LambdaTensor:
    """Coupling tensor read off full propagations of sender matrix units.

    For each sender basis unit E[c, d], embeds E (x) |0><0|, conjugates by W
    and partial-traces; by linearity the result is the (c, d) slice of the
    tensor.  Kept independent of ``lambda_tensor_direct``.
    """
    assert_unitary(w, what="evolution operator")
    ds = layout.dim_sender
    dr = layout.dim_receiver
    map4 = np.zeros((dr, dr, ds, ds), dtype=complex)
    for c in range(ds):
        for d in range(ds):
            unit = np.zeros((ds, ds), dtype=complex)
            unit[c, d] = 1.0
            rho0 = embed_operator(unit, layout, basis)
            map4[:, :, c, d] = receiver_state(w @ rho0 @ w.conj().T, layout, basis)
    return LambdaTensor(
        layout=layout,
        map4=map4,
        tau=tau,
        phi=None,
        basis_receiver=receiver_basis(layout),
        basis_sender=sender_basis(layout),
    )
