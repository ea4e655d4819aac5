"""Parameterized families of pure sender states and their moment tensors.

Two families are used throughout:

* ``full`` (two qubits): amplitudes from a hypersphere parameterization with
  angles phi0 in [0, 2pi], phi1, phi2 in [0, pi] and independent phases
  chi1..chi3 in [0, 2pi]; the volume weight is J = sin(phi1) sin^2(phi2).
  A single-qubit variant (phi0, chi1, J = 1) supports small smoke chains.
* ``even`` (two qubits): psi = (sin(phi/2), 0, 0, e^{i chi} cos(phi/2)),
  phi in [0, pi], chi in [0, 2pi], weight J = sin(phi); its density matrix
  carries only even coherence orders.

State-averaged quantities reduce to contractions against the fourth-moment
tensor T[a, b, c, d] = < conj(psi_a) psi_b psi_c conj(psi_d) >.  The phase
integrals enforce a selection rule (each chi must cancel), and the amplitude
integrals are separable products of trig monomials evaluated here by
Gauss-Legendre quadrature, which is exact to machine precision at 32 nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# Angle ranges of the full two-qubit family, keyed by parameter name.
PARAM_RANGES: dict[str, tuple[float, float]] = {
    "phi0": (0.0, TWO_PI),
    "phi1": (0.0, np.pi),
    "phi2": (0.0, np.pi),
    "chi1": (0.0, TWO_PI),
    "chi2": (0.0, TWO_PI),
    "chi3": (0.0, TWO_PI),
}
PARAM_NAMES = tuple(PARAM_RANGES)


def psi_full(
    phi0: np.ndarray,
    phi1: np.ndarray,
    phi2: np.ndarray,
    chi1: np.ndarray,
    chi2: np.ndarray,
    chi3: np.ndarray,
) -> np.ndarray:
    """Two-qubit pure states of the full family, stacked over the last axis."""
    s0, c0 = np.sin(phi0 / 2), np.cos(phi0 / 2)
    s1, c1 = np.sin(phi1 / 2), np.cos(phi1 / 2)
    s2, c2 = np.sin(phi2 / 2), np.cos(phi2 / 2)
    return np.stack(
        [
            s0 * s1 * s2,
            np.exp(1j * chi1) * c0 * s1 * s2,
            np.exp(1j * chi2) * c1 * s2,
            np.exp(1j * chi3) * c2,
        ],
        axis=-1,
    )


def psi_from_params(params: np.ndarray) -> np.ndarray:
    """psi_full applied to an (..., 6) array ordered as PARAM_NAMES."""
    return psi_full(*(params[..., k] for k in range(6)))


def psi_even(phi: np.ndarray, chi: np.ndarray) -> np.ndarray:
    """Even-order family: superposition of the 0- and 2-excitation states."""
    zeros = np.zeros_like(np.asarray(phi, dtype=float))
    return np.stack(
        [np.sin(phi / 2), zeros, zeros, np.exp(1j * chi) * np.cos(phi / 2)],
        axis=-1,
    )


def psi_single(phi0: np.ndarray, chi1: np.ndarray) -> np.ndarray:
    return np.stack([np.sin(phi0 / 2), np.exp(1j * chi1) * np.cos(phi0 / 2)], axis=-1)


def density_from_psi(psi: np.ndarray) -> np.ndarray:
    """Outer products |psi><psi| over a batch."""
    return psi[..., :, None] * psi[..., None, :].conj()


def _gauss_grid(a: float, b: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _phase_mask(labels: list[int], dim: int) -> np.ndarray:
    """Selection rule: every phase angle must cancel in conj(a) b c conj(d)."""
    mask = np.zeros((dim,) * 4, dtype=bool)
    n_labels = max(labels) + 1
    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                for d in range(dim):
                    ok = True
                    for lbl in range(1, n_labels):
                        plus = (labels[b] == lbl) + (labels[c] == lbl)
                        minus = (labels[a] == lbl) + (labels[d] == lbl)
                        if plus != minus:
                            ok = False
                            break
                    mask[a, b, c, d] = ok
    return mask


def _inverse_cdf_sin_squared(u: np.ndarray) -> np.ndarray:
    """Quantiles of the density sin^2 on [0, pi], via a dense interpolation table."""
    grid = np.linspace(0.0, np.pi, 8193)
    cdf = (grid - np.sin(grid) * np.cos(grid)) / np.pi
    return np.interp(u, cdf, grid)


@dataclass(frozen=True, eq=False)
class PureStateMeasure:
    """A weighted family of pure sender states.

    ``kind`` is 'full' or 'even'; 'full' supports one- and two-qubit senders,
    'even' is the two-qubit even-order family.
    """

    n_qubits: int
    kind: str = "full"

    def __post_init__(self) -> None:
        if self.kind not in ("full", "even"):
            raise ValueError(f"unknown state family {self.kind!r}")
        if self.kind == "even" and self.n_qubits != 2:
            raise ValueError("even-order family is defined for two qubits")
        if self.n_qubits not in (1, 2):
            raise ValueError(
                f"no state family implemented for {self.n_qubits}-qubit senders"
            )

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def moment_tensor(self, quad_nodes: int = 32) -> np.ndarray:
        """T[a, b, c, d] = < conj(psi_a) psi_b psi_c conj(psi_d) > (graded)."""
        if self.kind == "even":
            x, w = _gauss_grid(0.0, np.pi, quad_nodes)
            amps = np.zeros((4, quad_nodes))
            amps[0] = np.sin(x / 2)
            amps[3] = np.cos(x / 2)
            weight = w * np.sin(x)
            labels = [0, 0, 0, 1]
            prod = np.einsum("ai,bi->abi", amps, amps)
            t_amp = np.einsum("abi,cdi,i->abcd", prod, prod, weight)
        elif self.n_qubits == 1:
            x, w = _gauss_grid(0.0, TWO_PI, quad_nodes)
            amps = np.stack([np.sin(x / 2), np.cos(x / 2)])
            weight = w
            labels = [0, 1]
            prod = np.einsum("ai,bi->abi", amps, amps)
            t_amp = np.einsum("abi,cdi,i->abcd", prod, prod, weight)
        else:
            x0, w0 = _gauss_grid(0.0, TWO_PI, quad_nodes)
            x1, w1 = _gauss_grid(0.0, np.pi, quad_nodes)
            x2, w2 = _gauss_grid(0.0, np.pi, quad_nodes)
            s0, c0 = np.sin(x0 / 2), np.cos(x0 / 2)
            s1, c1 = np.sin(x1 / 2), np.cos(x1 / 2)
            s2, c2 = np.sin(x2 / 2), np.cos(x2 / 2)
            one0, one1 = np.ones_like(x0), np.ones_like(x1)
            amps = np.stack(
                [
                    np.einsum("i,j,k->ijk", s0, s1, s2),
                    np.einsum("i,j,k->ijk", c0, s1, s2),
                    np.einsum("i,j,k->ijk", one0, c1, s2),
                    np.einsum("i,j,k->ijk", one0, one1, c2),
                ]
            )
            weight = np.einsum(
                "i,j,k->ijk", w0, w1 * np.sin(x1), w2 * np.sin(x2) ** 2
            )
            labels = [0, 1, 2, 3]
            prod = np.einsum("aijk,bijk->abijk", amps, amps)
            t_amp = np.einsum("abijk,cdijk,ijk->abcd", prod, prod, weight)
        t = t_amp / weight.sum()
        t[~_phase_mask(labels, self.dim)] = 0.0
        return t.astype(complex)

    def sample_weighted(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw states distributed with the family's volume weight J."""
        if self.kind == "even":
            phi = np.arccos(1.0 - 2.0 * rng.uniform(size=n))
            chi = rng.uniform(0.0, TWO_PI, size=n)
            return psi_even(phi, chi)
        if self.n_qubits == 1:
            return psi_single(
                rng.uniform(0.0, TWO_PI, size=n), rng.uniform(0.0, TWO_PI, size=n)
            )
        phi0 = rng.uniform(0.0, TWO_PI, size=n)
        phi1 = np.arccos(1.0 - 2.0 * rng.uniform(size=n))
        phi2 = _inverse_cdf_sin_squared(rng.uniform(size=n))
        chi = rng.uniform(0.0, TWO_PI, size=(3, n))
        return psi_full(phi0, phi1, phi2, chi[0], chi[1], chi[2])

    def sample_uniform_params(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform angle draws (no volume weight), as an (n, n_params) array."""
        if self.kind == "even":
            phi = rng.uniform(0.0, np.pi, size=n)
            chi = rng.uniform(0.0, TWO_PI, size=n)
            return np.stack([phi, chi], axis=1)
        if self.n_qubits == 1:
            return rng.uniform(0.0, TWO_PI, size=(n, 2))
        cols = [rng.uniform(lo, hi, size=n) for lo, hi in PARAM_RANGES.values()]
        return np.stack(cols, axis=1)
