"""Effective hopping lattices produced by the Floquet bridge."""
from __future__ import annotations

import logging

import numpy as np

from floqlat.floquet.couplings import WEAK_DRIVE_LIMIT, bessel_hopping
from floqlat.lattice.gauge_lattice import GaugeLattice, Hopping
from floqlat.utils.floqlat_exception import ValidationError

logger = logging.getLogger(__name__)


def _check_drive(k: float, label: str) -> None:
    if abs(k) >= 1.0:
        raise ValidationError(f"|{label}|={abs(k):.4g} >= 1: the sideband expansion is invalid")
    if abs(k) >= WEAK_DRIVE_LIMIT:
        logger.warning("|%s|=%.4g >= %g: effective hopping is only approximate", label, abs(k), WEAK_DRIVE_LIMIT)


def two_site_effective(g12: float, K1: float, phi: float, detuning_sign: int = 1, *,
                       bessel: bool = False) -> GaugeLattice:
    """
    Two cavities bridged by the first sideband: J = g12 K1 / 2 with phase sign * phi.

    With bessel=True the amplitude is g12 J_1(K1) instead of its small-K limit.
    """
    if detuning_sign not in (1, -1):
        raise ValidationError(f"detuning_sign must be +1 or -1, got {detuning_sign}")
    _check_drive(K1, "K1")
    amplitude = bessel_hopping(g12, K1) if bessel else 0.5 * g12 * K1
    hop = Hopping.from_complex(0, 1, amplitude * np.exp(1j * detuning_sign * phi))
    return GaugeLattice(n_sites=2, hoppings=(hop,))


def three_site_effective(g12: float, g13: float, g23: float, omega_d: float, K1: float, K2: float,
                         phi1: float, phi2: float) -> GaugeLattice:
    """
    Triangle loop: direct plus coupler-mediated 1-2 link and two Floquet-bridged links to cavity 3.

    J12 = g12 - g13 g23 / omega_d (phase 0), J23 = g23 K2 / 2 (phase phi2), J31 = g13 K1 / 2 (phase -phi1),
    so the loop 1 -> 2 -> 3 -> 1 encloses phi2 - phi1.
    """
    if omega_d == 0:
        raise ValidationError("omega_d must be non-zero")
    _check_drive(K1, "K1")
    _check_drive(K2, "K2")
    hops = (
        Hopping.from_complex(0, 1, g12 - g13 * g23 / omega_d),
        Hopping.from_complex(1, 2, 0.5 * g23 * K2 * np.exp(1j * phi2)),
        Hopping.from_complex(2, 0, 0.5 * g13 * K1 * np.exp(-1j * phi1)),
    )
    return GaugeLattice(n_sites=3, hoppings=hops)


def ab_effective(J: float, phi1: float, phi4: float) -> GaugeLattice:
    """
    Four-site Aharonov-Bohm plaquette 1-2-4-3-1 (sites 0..3).

    Cavities 1 and 4 each reach the two path cavities 2 and 3 with opposite phases,
    so the loop 0 -> 1 -> 3 -> 2 -> 0 encloses 2 (phi1 + phi4).
    """
    if J <= 0:
        raise ValidationError(f"J must be > 0, got {J}")
    hops = (
        Hopping(0, 1, J, phi1),
        Hopping(0, 2, J, -phi1),
        Hopping(1, 3, J, phi4),
        Hopping(2, 3, J, -phi4),
    )
    return GaugeLattice(n_sites=4, hoppings=hops)
