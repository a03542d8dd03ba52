"""Two-leg flux ladder: legs a (sites 0..N-1) and b (sites N..2N-1) joined by rungs."""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from floqlat.lattice.gauge_lattice import GaugeLattice, Hopping
from floqlat.utils.floqlat_exception import ValidationError

logger = logging.getLogger(__name__)


class Boundary(str, enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class LadderSpec:
    n_rungs: int
    t_prime: float
    J_rung: float
    phi: float
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if int(self.n_rungs) < 2:
            raise ValidationError(f"n_rungs must be >= 2, got {self.n_rungs}")
        if self.boundary is Boundary.PERIODIC and self.n_rungs < 3:
            raise ValidationError("a periodic ladder needs at least 3 rungs")

    @property
    def plaquette_flux(self) -> float:
        return 2.0 * self.phi

    def a(self, i: int) -> int:
        return i % self.n_rungs

    def b(self, i: int) -> int:
        return self.n_rungs + i % self.n_rungs


def _leg_links(spec: LadderSpec) -> range:
    return range(spec.n_rungs if spec.boundary is Boundary.PERIODIC else spec.n_rungs - 1)


def ladder_lattice(spec: LadderSpec) -> GaugeLattice:
    """t' e^{i phi} a_{i+1}^dag a_i + t' e^{-i phi} b_{i+1}^dag b_i + J a_i^dag b_i."""
    hops = []
    for i in _leg_links(spec):
        hops.append(Hopping.from_complex(spec.a(i + 1), spec.a(i), spec.t_prime * np.exp(1j * spec.phi)))
        hops.append(Hopping.from_complex(spec.b(i + 1), spec.b(i), spec.t_prime * np.exp(-1j * spec.phi)))
    for i in range(spec.n_rungs):
        hops.append(Hopping.from_complex(spec.a(i), spec.b(i), spec.J_rung))
    return GaugeLattice(n_sites=2 * spec.n_rungs, hoppings=tuple(hops))


def ladder_hamiltonian(spec: LadderSpec) -> np.ndarray:
    return ladder_lattice(spec).hopping_matrix()


def plaquette_cycles(spec: LadderSpec) -> list[tuple[int, int, int, int]]:
    """Elementary squares a_i -> b_i -> b_{i+1} -> a_{i+1}, each enclosing 2 phi."""
    return [(spec.a(i), spec.b(i), spec.b(i + 1), spec.a(i + 1)) for i in _leg_links(spec)]


def commensurate_momenta(n_rungs: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n_rungs) / n_rungs


def bloch_matrices(t_prime: float, J: float, phi: float, k_grid) -> np.ndarray:
    k = np.asarray(k_grid, dtype=float)
    m = np.empty(k.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = 2.0 * t_prime * np.cos(k - phi)
    m[..., 1, 1] = 2.0 * t_prime * np.cos(k + phi)
    m[..., 0, 1] = J
    m[..., 1, 0] = J
    return m


def ladder_bloch_spectrum(t_prime: float, J: float, phi: float, k_grid) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper band energies (MHz) of the periodic ladder at each momentum."""
    bands = np.linalg.eigvalsh(bloch_matrices(t_prime, J, phi, k_grid))
    return bands[..., 0], bands[..., 1]


def bloch_bands_closed_form(t_prime: float, J: float, phi: float, k_grid) -> tuple[np.ndarray, np.ndarray]:
    k = np.asarray(k_grid, dtype=float)
    center = 2.0 * t_prime * np.cos(k) * np.cos(phi)
    split = np.sqrt(J ** 2 + 4.0 * t_prime ** 2 * np.sin(k) ** 2 * np.sin(phi) ** 2)
    return center - split, center + split


def open_spectrum(spec: LadderSpec) -> np.ndarray:
    """Sorted single-particle energies of the finite ladder with open ends."""
    if spec.boundary is not Boundary.OPEN:
        spec = LadderSpec(spec.n_rungs, spec.t_prime, spec.J_rung, spec.phi, Boundary.OPEN)
    return np.linalg.eigvalsh(ladder_hamiltonian(spec))
