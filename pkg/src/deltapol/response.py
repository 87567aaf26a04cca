"""Sum-over-states oracle on a hard-wall box.

H0 is discretized with the three-point Laplacian on the interior nodes of
[-L/2, L/2]; the delta well becomes -g/dx on the center node. The response
function is then an explicit finite sum over eigenpairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from deltapol.errors import DeltaPolError, DiscretizationError


@dataclass(frozen=True)
class BoxSpec:
    length: float = 200.0
    n_grid: int = 4000
    g: float = 1.0
    mu: float = 1e-3

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"box length must be positive, got {self.length!r}")
        if self.n_grid < 3:
            raise ValueError(f"need at least 3 grid points, got {self.n_grid!r}")
        if self.mu < 0:
            raise ValueError(f"broadening mu must be >= 0, got {self.mu!r}")

    @property
    def n_nodes(self) -> int:
        """Node count actually used; an even request gains one node so the well sits on the center node."""
        return self.n_grid if self.n_grid % 2 else self.n_grid + 1

    @property
    def spacing(self) -> float:
        return self.length / (self.n_nodes + 1)

    def check_resolution(self):
        k0dx = self.g * self.spacing
        if self.g > 0 and not k0dx < 0.1:
            raise DiscretizationError(
                f"grid too coarse for the bound state: k0*dx = {k0dx:.3g} (need < 0.1); "
                f"L = {self.length}, N = {self.n_grid}, dx = {self.spacing:.3g}"
            )


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenpairs of the box Hamiltonian.

    ``states[:, n]`` is normalized so that ``spacing * sum(states[:, n]**2) == 1``.
    """

    energies: np.ndarray
    states: np.ndarray
    positions: np.ndarray
    spacing: float
    ground_index: int = 0

    @property
    def ground_energy(self) -> float:
        return float(self.energies[self.ground_index])

    @property
    def omega_n0(self) -> np.ndarray:
        return self.energies - self.energies[self.ground_index]

    def matrix_elements(self, op) -> tuple[np.ndarray, np.ndarray]:
        """(<0|op|n>, <n|op|0>) for all n.

        ``op`` is either a diagonal (a grid function, length N) or a dense N x N
        matrix acting on grid vectors.
        """
        op = np.asarray(op)
        n = self.states.shape[0]
        psi0 = self.states[:, self.ground_index]
        if op.ndim == 1:
            if op.shape != (n,):
                raise ValueError(f"diagonal operator has shape {op.shape}, grid has {n} nodes")
            row = self.spacing * (psi0 * op) @ self.states
            return row, row
        if op.shape != (n, n):
            raise ValueError(f"operator has shape {op.shape}, expected {(n, n)}")
        bra = self.spacing * (psi0 @ op) @ self.states
        ket = self.spacing * self.states.T @ (op @ psi0)
        return bra, ket

    def dipole_elements(self) -> np.ndarray:
        return self.matrix_elements(self.positions)[0]


def build_box_eigensystem(spec: BoxSpec) -> EigenSystem:
    spec.check_resolution()
    n = spec.n_nodes
    dx = spec.spacing
    positions = (np.arange(n) - (n - 1) // 2) * dx

    diag = np.full(n, 1.0 / dx**2)
    diag[(n - 1) // 2] -= spec.g / dx
    off = np.full(n - 1, -0.5 / dx**2)
    try:
        energies, vectors = linalg.eigh_tridiagonal(diag, off)
    except linalg.LinAlgError as exc:
        raise DeltaPolError(f"eigensolver failed for N = {n}: {exc}") from exc

    n_bound = int(np.count_nonzero(energies < 0.0))
    if spec.g > 0 and n_bound != 1:
        raise DiscretizationError(f"expected exactly one bound state, found {n_bound}")
    vectors = vectors / math.sqrt(dx)
    # fix the sign so the ground state is positive at the well
    if vectors[(n - 1) // 2, 0] < 0:
        vectors[:, 0] = -vectors[:, 0]
    return EigenSystem(energies=energies, states=vectors, positions=positions, spacing=dx)


def chi_ba(es: EigenSystem, op_b, op_a, omega: float, mu: float) -> complex:
    """Response function of <B> to a perturbation A F(t), summed over excited states."""
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu!r}")
    b0n, bn0 = es.matrix_elements(op_b)
    a0n, an0 = es.matrix_elements(op_a)
    w = es.omega_n0
    mask = np.ones(w.shape, dtype=bool)
    mask[es.ground_index] = False
    w = w[mask]
    first = b0n[mask] * an0[mask] / (omega - w + 1j * mu)
    second = a0n[mask] * bn0[mask] / (omega + w + 1j * mu)
    return complex(np.sum(first - second))


def _dipole_weights(es: EigenSystem):
    x0n = es.dipole_elements()
    mask = np.ones(x0n.shape, dtype=bool)
    mask[es.ground_index] = False
    return es.omega_n0[mask], x0n[mask] ** 2


def alpha_split_oracle(es: EigenSystem, omega: float, mu: float) -> tuple[complex, complex]:
    """alpha(+omega), alpha(-omega) as the two terms of -chi_xx."""
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu!r}")
    w, s = _dipole_weights(es)
    plus = np.sum(s / (w - omega - 1j * mu))
    minus = np.sum(s / (w + omega + 1j * mu))
    return complex(plus), complex(minus)


def dipole_sum_rule(es: EigenSystem) -> float:
    """sum_n |<0|x|n>|^2; equals <0|x^2|0> by completeness."""
    return float(np.sum(_dipole_weights(es)[1]))


def trk_sum(es: EigenSystem) -> float:
    """sum_n omega_n0 |<0|x|n>|^2; 1/2 in these units."""
    w, s = _dipole_weights(es)
    return float(np.sum(w * s))


def even_state_mask(es: EigenSystem, tol: float = 1e-6) -> np.ndarray:
    """True for eigenvectors symmetric about the center node."""
    v = es.states
    return np.max(np.abs(v - v[::-1]), axis=0) <= tol * np.max(np.abs(v), axis=0)


def absorption_level_density(es: EigenSystem, omega: float, strength_floor: float = 1e-14) -> float:
    """Im alpha(+omega) as pi * |x_0n|^2 * (local density of dipole-active levels).

    The mu -> 0 limit taken with the box level spacing rather than a fixed
    broadening; needs omega well inside the discretized continuum.
    """
    w, s = _dipole_weights(es)
    active = s > strength_floor
    w, s = w[active], s[active]
    if not (w[1] < omega < w[-2]):
        raise ValueError(f"omega = {omega} lies outside the resolved box spectrum")
    density = 2.0 / (w[2:] - w[:-2])
    profile = math.pi * s[1:-1] * density
    return float(np.interp(omega, w[1:-1], profile))
