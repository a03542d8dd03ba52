"""
Fourier harmonics of the modulated dispersive shift.

The longitudinal drive turns the qubit detuning into D(t) = D_p (1 + lam cos(w_d t + phi)),
so the cavity sees chi(t) = chi0 * f(theta) with f(theta) = 1 / (1 + lam cos(theta + phi)).
We keep the complex coefficients

    c_0 = (1/2pi) int f dtheta               (real)
    c_n = (1/pi)  int f exp(-i n theta)      (n >= 1)

so that f = c_0 + sum_n |c_n| cos(n theta + arg c_n). The amplitude and phase of the
n-th component are xi_n = |c_n| and phi_n = arg c_n; at phi = 0 the first coefficient
is negative real (c_1 -> -lam for small lam).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from floqlat.utils.floqlat_exception import ValidationError

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 4096
DEFAULT_N_MAX = 8


def wrap_phase(x):
    """Map angles to (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)


@dataclass(frozen=True)
class DriveSpec:
    lam: float
    omega_d: float = 1.0    # MHz; the harmonics themselves do not depend on it
    phi: float = 0.0

    def __post_init__(self):
        _check_lambda(self.lam)
        if self.omega_d == 0:
            raise ValidationError("omega_d must be non-zero")

    @classmethod
    def from_drive_amplitude(cls, omega_p: float, delta_p: float, omega_d: float, phi: float = 0.0) -> "DriveSpec":
        if delta_p == 0:
            raise ValidationError("delta_p must be non-zero")
        return cls(lam=abs(omega_p / delta_p), omega_d=omega_d, phi=phi)


@dataclass(frozen=True)
class Harmonics:
    lam: float
    phi: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        # c_0 is real by construction; drop quadrature noise and signed zeros
        c[0] = complex(c[0].real, 0.0)
        tiny = np.abs(c.imag) <= 1e-13 * np.maximum(1.0, np.abs(c))
        c[tiny] = c[tiny].real + 0j
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n_max(self) -> int:
        return self.coeffs.size - 1

    @property
    def c0(self) -> float:
        return float(self.coeffs[0].real)

    @property
    def xi(self) -> np.ndarray:
        return np.abs(self.coeffs)

    @property
    def phases(self) -> np.ndarray:
        return wrap_phase(np.angle(self.coeffs))

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeffs[n])


def _check_lambda(lam: float) -> None:
    if not np.isfinite(lam) or lam < 0:
        raise ValidationError(f"lambda must be >= 0, got {lam}")
    if lam >= 1:
        raise ValidationError(f"lambda must be < 1 (the modulated detuning crosses zero), got {lam}")


def _check_n_max(n_max: int) -> None:
    if int(n_max) < 1:
        raise ValidationError(f"n_max must be >= 1, got {n_max}")


def chi_harmonics(drive: DriveSpec, n_max: int = DEFAULT_N_MAX, points: int = DEFAULT_POINTS) -> Harmonics:
    """Fourier coefficients by periodic trapezoid quadrature over one drive period."""
    _check_lambda(drive.lam)
    _check_n_max(n_max)
    if points <= 2 * n_max:
        raise ValidationError(f"{points} quadrature points cannot resolve n_max={n_max}")
    theta = 2.0 * np.pi * np.arange(points) / points
    f = 1.0 / (1.0 + drive.lam * np.cos(theta + drive.phi))
    # the uniform-grid trapezoid rule on a periodic integrand is exactly the DFT
    spectrum = np.fft.rfft(f)[: n_max + 1] / points
    coeffs = 2.0 * spectrum
    coeffs[0] = spectrum[0]
    return Harmonics(lam=drive.lam, phi=drive.phi, coeffs=coeffs)


def geometric_ratio(lam: float) -> float:
    """r(lam) = (1 - sqrt(1 - lam^2)) / lam, the decay ratio |c_{n+1} / c_n|."""
    _check_lambda(lam)
    if lam == 0:
        return 0.0
    return (1.0 - np.sqrt(1.0 - lam * lam)) / lam


def chi_harmonics_closed_form(drive: DriveSpec, n_max: int = DEFAULT_N_MAX) -> Harmonics:
    """Analytic series c_0 = 1/sqrt(1 - lam^2), c_n = 2 c_0 (-r)^n exp(i n phi)."""
    _check_lambda(drive.lam)
    _check_n_max(n_max)
    c0 = 1.0 / np.sqrt(1.0 - drive.lam ** 2)
    n = np.arange(n_max + 1)
    coeffs = 2.0 * c0 * (-geometric_ratio(drive.lam)) ** n * np.exp(1j * n * drive.phi)
    coeffs[0] = c0
    return Harmonics(lam=drive.lam, phi=drive.phi, coeffs=coeffs)


def harmonics_sweep(lambdas, n_max: int = 3, phi: float = 0.0, points: int = DEFAULT_POINTS) -> dict[str, np.ndarray]:
    """
    Zero/first-order components and relative amplitudes as functions of lambda.

    Returns columns lambda, c0, xi1, xi2, xi3, phi1_rad, xi2_over_xi1, xi3_over_xi1.
    """
    n_max = max(3, int(n_max))
    rows = []
    for lam in np.asarray(lambdas, dtype=float):
        h = chi_harmonics(DriveSpec(lam=float(lam), phi=phi), n_max=n_max, points=points)
        xi = h.xi
        ratio = (lambda k: xi[k] / xi[1] if xi[1] > 0 else 0.0)
        rows.append((lam, h.c0, xi[1], xi[2], xi[3], h.phases[1], ratio(2), ratio(3)))
    names = ("lambda", "c0", "xi1", "xi2", "xi3", "phi1_rad", "xi2_over_xi1", "xi3_over_xi1")
    table = np.array(rows, dtype=float).reshape(-1, len(names))
    return {name: table[:, k] for k, name in enumerate(names)}


def modulated_shift(g_p: float, delta_p: float, drive: DriveSpec, t) -> np.ndarray:
    """chi(t) = g_p^2 / (delta_p (1 + lam cos(2 pi w_d t + phi))) in MHz, t in us."""
    if delta_p == 0:
        raise ValidationError("delta_p must be non-zero")
    theta = 2.0 * np.pi * drive.omega_d * np.asarray(t, dtype=float) + drive.phi
    return g_p ** 2 / (delta_p * (1.0 + drive.lam * np.cos(theta)))


def reconstruct(h: Harmonics, chi0: float, omega_d: float, t) -> np.ndarray:
    """Fourier synthesis chi0 * (c_0 + sum_n Re(c_n exp(i n w_d t)))."""
    theta = 2.0 * np.pi * omega_d * np.asarray(t, dtype=float)
    n = np.arange(1, h.n_max + 1)
    series = np.real(np.exp(1j * np.multiply.outer(theta, n)) @ h.coeffs[1:])
    return chi0 * (h.c0 + series)


def adiabatic_shift(g_p: float, delta_p: float, drive: DriveSpec, points: int = DEFAULT_POINTS) -> float:
    """
    Period-averaged exact two-level dressed shift of a cavity coupled to a driven qubit.

    Reduces to chi0 * c_0 when g_p << delta_p; the difference is the fourth-order
    dispersive correction, which matters when lam pushes the detuning towards g_p.
    """
    shift, _ = _dressed_samples(g_p, delta_p, drive, points)
    return float(np.mean(shift))


def _dressed_samples(g_p: float, delta_p: float, drive: DriveSpec, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact dressed shift and photon amplitude cos(theta_mix) at u = 2 pi k / points, u = 2 pi w_d t."""
    if delta_p == 0:
        raise ValidationError("delta_p must be non-zero")
    _check_lambda(drive.lam)
    u = 2.0 * np.pi * np.arange(points) / points
    detuning = delta_p * (1.0 + drive.lam * np.cos(u + drive.phi))
    root = np.sqrt(detuning ** 2 + 4.0 * g_p ** 2)
    shift = 0.5 * (-detuning + np.sign(delta_p) * root)
    weight = np.sqrt(0.5 * (1.0 + np.abs(detuning) / root))
    return shift, weight


@dataclass(frozen=True)
class DressedModulation:
    """
    Cavity modulation produced by a driven qubit, without the dispersive expansion.

    shift(t) = mean + sum_n Re(harmonics[n-1] exp(i n u)), u = 2 pi w_d t. The photon picks up
    the phase exp(i Phi(t)) with dPhi/dt = 2 pi (shift - mean), and keeps the amplitude
    cos(theta_mix) on the bare cavity; sidebands[m] is the Fourier weight of the product at
    exp(i m u).
    """
    mean: float
    harmonics: np.ndarray = field(repr=False)
    sidebands: dict[int, complex] = field(repr=False)

    def sideband(self, m: int) -> complex:
        return self.sidebands[m]


def dressed_modulation(g_p: float, delta_p: float, drive: DriveSpec, n_max: int = DEFAULT_N_MAX,
                       m_max: int = 3, points: int = DEFAULT_POINTS) -> DressedModulation:
    _check_n_max(n_max)
    if points <= 2 * max(n_max, m_max):
        raise ValidationError(f"{points} points cannot resolve n_max={n_max}, m_max={m_max}")
    shift, weight = _dressed_samples(g_p, delta_p, drive, points)
    spectrum = np.fft.fft(shift) / points
    k = np.fft.fftfreq(points, 1.0 / points)
    phase_spectrum = np.zeros_like(spectrum)
    nonzero = k != 0
    phase_spectrum[nonzero] = spectrum[nonzero] / (1j * k[nonzero] * drive.omega_d)
    phase = np.real(np.fft.ifft(phase_spectrum) * points)
    weights = np.fft.fft(weight * np.exp(1j * phase)) / points
    sidebands = {m: complex(weights[m % points]) for m in range(-m_max, m_max + 1)}
    return DressedModulation(mean=float(spectrum[0].real), harmonics=2.0 * spectrum[1: n_max + 1],
                             sidebands=sidebands)
