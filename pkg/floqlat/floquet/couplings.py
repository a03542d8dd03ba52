"""
Dispersive elimination of the coupler and p-qubits: static and mediated couplings,
renormalized detunings and the Floquet drive strengths K_n.

All quantities are ordinary frequencies in MHz.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np
from scipy.special import jv

from floqlat.floquet.harmonics import Harmonics
from floqlat.utils.floqlat_exception import ConvergenceError, ValidationError

logger = logging.getLogger(__name__)

DISPERSIVE_RATIO = 5.0          # |delta| >= 5 g
NEAR_DEGENERATE_FRACTION = 0.2  # |delta_2 - delta_1| <= 0.2 min|delta_i|
WEAK_DRIVE_LIMIT = 0.5          # |K_1| below which J1(K) ~ K/2 holds
RESONANCE_ITERATIONS = 50


def _warn_dispersive(g: float, delta: float, what: str) -> None:
    if abs(delta) < DISPERSIVE_RATIO * abs(g):
        logger.warning("%s: |delta|=%.4g is below %g*g=%.4g; dispersive expansion is unreliable",
                       what, abs(delta), DISPERSIVE_RATIO, DISPERSIVE_RATIO * abs(g))


@dataclass(frozen=True)
class DispersiveSpec:
    g_p: float
    delta_p: float

    def __post_init__(self):
        if self.delta_p == 0:
            raise ValidationError("delta_p must be non-zero")
        _warn_dispersive(self.g_p, self.delta_p, "p-qubit")

    @property
    def chi0(self) -> float:
        return self.g_p ** 2 / self.delta_p


@dataclass(frozen=True)
class MediatedCoupling:
    g12: float
    delta12_prime: float
    delta12: float | None = None

    def with_renormalized(self, chi0: float, c0: float) -> "MediatedCoupling":
        return replace(self, delta12=renormalized_detuning(self, chi0, c0))


def dispersive_shift(g_p: float, delta_p: float) -> float:
    """chi0 = g_p^2 / delta_p."""
    return DispersiveSpec(g_p, delta_p).chi0


def kerr_dispersive_shift(g_p: float, delta_p: float, kerr: float) -> float:
    """
    Dispersive shift of a cavity coupled to a weakly anharmonic (Kerr) mode.

    chi0 = -g^2 K / (delta (delta - K)); tends to g^2/delta for |K| >> |delta|.
    """
    if delta_p == 0:
        raise ValidationError("delta_p must be non-zero")
    if delta_p == kerr:
        raise ValidationError("delta_p equals the anharmonicity; the two-photon level is resonant")
    _warn_dispersive(g_p, delta_p, "Kerr mode")
    return -g_p ** 2 * kerr / (delta_p * (delta_p - kerr))


def mediated_coupling(g1: float, g2: float, delta1: float, delta2: float) -> MediatedCoupling:
    """
    Coupler-mediated exchange between two cavities after eliminating the coupler.

    g12 = (g1 g2 / 2)(1/delta1 + 1/delta2)
    delta12' = (delta2 - delta1)(1 - g1 g2 / (delta1 delta2))
    """
    if delta1 == 0 or delta2 == 0:
        raise ValidationError("coupler detunings must be non-zero")
    _warn_dispersive(g1, delta1, "cavity 1 / coupler")
    _warn_dispersive(g2, delta2, "cavity 2 / coupler")
    if abs(delta2 - delta1) > NEAR_DEGENERATE_FRACTION * min(abs(delta1), abs(delta2)):
        logger.warning("cavities are not near-degenerate (|delta2 - delta1|=%.4g); "
                       "the mediated coupling is approximate", abs(delta2 - delta1))
    g12 = 0.5 * g1 * g2 * (1.0 / delta1 + 1.0 / delta2)
    delta12_prime = (delta2 - delta1) * (1.0 - g1 * g2 / (delta1 * delta2))
    return MediatedCoupling(g12=g12, delta12_prime=delta12_prime)


def renormalized_detuning(mc: MediatedCoupling, chi0: float, c0: float) -> float:
    """delta12 = delta12' + 2 g12^2 / delta12' + chi0 c0."""
    if mc.delta12_prime == 0:
        raise ValidationError("delta12' must be non-zero")
    return mc.delta12_prime + 2.0 * mc.g12 ** 2 / mc.delta12_prime + chi0 * c0


def drive_strengths(chi0: float, omega_d: float, h: Harmonics) -> np.ndarray:
    """K_n = chi0 xi_n / (n omega_d) for n = 1..n_max, signed like chi0 / omega_d."""
    if omega_d == 0:
        raise ValidationError("omega_d must be non-zero")
    n = np.arange(1, h.n_max + 1)
    k = chi0 * h.xi[1:] / (n * omega_d)
    if abs(k[0]) >= WEAK_DRIVE_LIMIT:
        logger.warning("|K1|=%.4g >= %g: first-order Bessel expansion is inaccurate", abs(k[0]), WEAK_DRIVE_LIMIT)
    return k


def stark_resonant_detuning(target: float, coupling_sq: float) -> float:
    """
    Bare detuning d whose level-repelled value d + coupling_sq / d equals target.

    Picks the root continuously connected to d = target as coupling_sq -> 0.
    """
    if coupling_sq == 0:
        return float(target)
    disc = target * target - 4.0 * coupling_sq
    if target == 0 or disc < 0:
        raise ValidationError(f"no bare detuning reaches {target:.6g} MHz with coupling^2 sum {coupling_sq:.6g}")
    return float(0.5 * (target + np.sign(target) * np.sqrt(disc)))


def sideband_resonant_detuning(target: float, omega_d: float, weights: Mapping[int, float],
                               resonant: int) -> float:
    """
    Bare detuning d of a cavity exchanging with a modulated partner through sidebands m.

    Sideband m carries |coupling|^2 = weights[m] and sits at d - m omega_d; every sideband
    except `resonant` repels the pair by 2 weights[m] / (d - m omega_d). Returns the d whose
    repelled value equals target. With only m = 0 this is stark_resonant_detuning.
    """
    if omega_d == 0:
        raise ValidationError("omega_d must be non-zero")
    off = {m: float(w) for m, w in weights.items() if m != resonant and w != 0}
    d = stark_resonant_detuning(target, 2.0 * off.get(0, 0.0))
    for _ in range(RESONANCE_ITERATIONS):
        gaps = {m: d - m * omega_d for m in off}
        if any(abs(gap) < abs(omega_d) / 2 for gap in gaps.values()):
            raise ValidationError(f"target {target:.6g} MHz is not isolated from the off-resonant sidebands")
        updated = target - sum(2.0 * off[m] / gap for m, gap in gaps.items())
        if abs(updated - d) <= 1e-13 * max(1.0, abs(target)):
            return float(updated)
        d = updated
    raise ConvergenceError(f"sideband resonance for target {target:.6g} MHz did not converge")


def sideband_weights(k: float, k_max: int = 3) -> dict[int, float]:
    """Bessel weights J_m(K) of the sidebands m = -k_max..k_max of a frequency-modulated mode."""
    m = np.arange(-k_max, k_max + 1)
    return dict(zip(m.tolist(), jv(m, k).tolist()))


def bessel_hopping(g: float, k: float) -> float:
    """Resonant first-sideband exchange g J_1(K), exact in K."""
    return float(g * jv(1, k))
