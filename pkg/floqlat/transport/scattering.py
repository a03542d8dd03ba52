"""
Input-output scattering of a lossy gauge lattice.

With H the hopping matrix (MHz), K = diag(kappa_i) and an input field detuned by delta_d,

    S = I - sqrt(K) (i(delta_d I + H) + K/2)^-1 sqrt(K),

restricted to the port sites. When every site is a port with equal loss this is the
Cayley form (i(delta_d + H) - K/2)(i(delta_d + H) + K/2)^-1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from floqlat.common.sweep import SweepResult, run_sweep
from floqlat.lattice.gauge_lattice import GaugeLattice
from floqlat.lattice.models import ab_effective
from floqlat.utils.floqlat_exception import ValidationError

logger = logging.getLogger(__name__)

CCW = ((1, 0), (2, 1), (0, 2))
CW = ((2, 0), (0, 1), (1, 2))


@dataclass(frozen=True)
class ScatteringResult:
    delta_d: float
    S: np.ndarray
    ports: tuple[int, ...]

    @property
    def transmissions(self) -> np.ndarray:
        """T[out, in] = |S[out, in]|^2."""
        return np.abs(self.S) ** 2

    def transmission(self, out_port: int, in_port: int) -> float:
        """Transmission between lattice sites, both of which must be ports."""
        try:
            return float(self.transmissions[self.ports.index(out_port), self.ports.index(in_port)])
        except ValueError as e:
            raise ValidationError(f"sites {out_port}, {in_port} are not both ports of {self.ports}") from e


def _ports(lattice: GaugeLattice, ports: Sequence[int] | None) -> tuple[int, ...]:
    kappa = np.asarray(lattice.losses)
    if ports is None:
        ports = tuple(int(i) for i in np.flatnonzero(kappa > 0))
        if not ports:
            raise ValidationError("lattice has no lossy site to use as a port")
        return ports
    ports = tuple(int(p) for p in ports)
    for p in ports:
        if not 0 <= p < lattice.n_sites:
            raise ValidationError(f"port {p} outside 0..{lattice.n_sites - 1}")
        if kappa[p] <= 0:
            raise ValidationError(f"port {p} has kappa = 0; ports need kappa > 0")
    return ports


def scattering_matrix(lattice: GaugeLattice, delta_d: float, ports: Sequence[int] | None = None) -> ScatteringResult:
    ports = _ports(lattice, ports)
    kappa = np.asarray(lattice.losses, dtype=float)
    n = lattice.n_sites
    m = 1j * (delta_d * np.eye(n) + lattice.hopping_matrix()) + 0.5 * np.diag(kappa)
    root_k = np.sqrt(kappa)
    try:
        response = np.linalg.solve(m, np.diag(root_k))
    except np.linalg.LinAlgError as e:
        raise ValidationError(f"scattering denominator is singular at delta_d={delta_d}") from e
    s_full = np.eye(n) - root_k[:, None] * response
    idx = np.ix_(ports, ports)
    return ScatteringResult(delta_d=float(delta_d), S=s_full[idx], ports=ports)


def circulator_fidelity(result: ScatteringResult, direction: str = "ccw") -> float:
    """Mean transmission along the cyclic permutation 1->2->3->1 (ccw) or 1->3->2->1 (cw)."""
    if result.S.shape != (3, 3):
        raise ValidationError(f"circulator fidelity needs 3 ports, got {result.S.shape[0]}")
    if direction not in ("ccw", "cw"):
        raise ValidationError(f"direction must be 'ccw' or 'cw', got {direction!r}")
    t = result.transmissions
    pairs = CCW if direction == "ccw" else CW
    return float(np.mean([t[o, i] for o, i in pairs]))


def transmission_sweep(lattice: GaugeLattice, delta_range: Sequence[float], input_port: int = 0, *,
                       ports: Sequence[int] | None = None, threads: int = 1) -> SweepResult:
    """T_i(delta_d) for a fixed input port; columns are named T1..Tn after the output port."""
    ports = _ports(lattice, ports)
    if input_port not in ports:
        raise ValidationError(f"input port {input_port} is not one of {ports}")
    col = ports.index(input_port)

    def point(delta: float) -> np.ndarray:
        return scattering_matrix(lattice, delta, ports).transmissions[:, col]

    values = np.array(run_sweep(point, list(delta_range), threads=threads)).reshape(-1, len(ports))
    curves = {f"T{p + 1}": values[:, k] for k, p in enumerate(ports)}
    return SweepResult("delta_d_MHz", np.asarray(delta_range, dtype=float), curves,
                       meta={"input_port": input_port + 1, "solver": "analytic"})


def ab_lattice(J: float, kappa: float, kappa_p: float, flux: float) -> GaugeLattice:
    """Plaquette in the symmetric gauge phi1 = phi4 = flux / 4, ports on sites 1 and 4."""
    return ab_effective(J, 0.25 * flux, 0.25 * flux).with_losses((kappa, kappa_p, kappa_p, kappa))


def ab_interference(J: float, kappa: float, kappa_p: float, flux_range: Sequence[float], *,
                    delta_d: float = 0.0, threads: int = 1) -> SweepResult:
    """Transmission T41 from cavity 1 to cavity 4 through the two interfering paths."""
    if kappa <= 0:
        if kappa_p <= 0:
            raise ValidationError("all losses are zero; the plaquette has no ports")
        raise ValidationError(f"port loss kappa must be > 0, got {kappa}")
    if kappa_p <= 0:
        # without path loss the antisymmetric mode of cavities 2 and 3 is dark at flux 0
        raise ValidationError(f"path loss kappa_p must be > 0, got {kappa_p}")

    def point(flux: float) -> float:
        result = scattering_matrix(ab_lattice(J, kappa, kappa_p, flux), delta_d, ports=(0, 3))
        return float(result.transmissions[1, 0])

    values = run_sweep(point, list(flux_range), threads=threads)
    return SweepResult("flux_rad", np.asarray(flux_range, dtype=float), {"T41": np.asarray(values)},
                       meta={"J_MHz": J, "kappa_MHz": kappa, "kappa_p_MHz": kappa_p})
