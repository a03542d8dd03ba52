"""
Three-cavity loop with two Floquet-modulated cavities.

Cavities 1 and 2 share the zero of the frame; cavity 3 sits near omega_d so that
delta13 = delta23 = -omega_d. The modulation of cavity i bridges the detuned i-3 link
with phase phi_i, giving the loop flux phi2 - phi1. In qubit_eliminated mode the
modulation is the first harmonic K_i omega_d cos(omega_d t + phi_i) n_i, or every harmonic
of the exact dressed shift with modulation='dressed'; in with_qubits mode the driven
p-qubits are kept explicitly.

The off-resonant sidebands shift all three cavities at second order in g / omega_d. With
stark_compensated the static on-site energies are calibrated so that the period-averaged
Floquet Hamiltonian of the single-phonon model has no on-site terms.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import logm

from floqlat.core.evolution import (DEFAULT_STEP_FACTOR, DrivenTerm, TimeDependentModel, Trajectory,
                                    cosine_envelope, evolve, rk4_maps)
from floqlat.core.space import OperatorKind, SubsystemSpec, basis_state, build_space, mode_operator, quadratic_form
from floqlat.dynamics.analysis import first_peak, period_average
from floqlat.dynamics.two_site import dressed_state, output_grid
from floqlat.floquet.couplings import DispersiveSpec, drive_strengths
from floqlat.floquet.harmonics import DriveSpec, adiabatic_shift, chi_harmonics, dressed_modulation
from floqlat.lattice.gauge_lattice import GaugeLattice
from floqlat.lattice.models import three_site_effective
from floqlat.utils.floqlat_exception import ConvergenceError, ValidationError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
PEAK_HEIGHT = 0.3
TIE_FRACTION = 0.01
DRESSED_HARMONICS = 4
CALIBRATION_ITERATIONS = 10
CALIBRATION_TOLERANCE = 1e-10   # MHz


class ThreeSiteMode(str, enum.Enum):
    WITH_QUBITS = "with_qubits"
    QUBIT_ELIMINATED = "qubit_eliminated"


class Modulation(str, enum.Enum):
    FIRST_HARMONIC = "first_harmonic"
    DRESSED = "dressed"


@dataclass(frozen=True)
class PQubitSpec:
    g_p: float
    delta_p: float
    lam: float | None = None
    omega_p: float | None = None

    def __post_init__(self):
        if self.lam is None and self.omega_p is None:
            raise ValidationError("p-qubit needs lam or omega_p")
        DispersiveSpec(self.g_p, self.delta_p)
        if self.lam is not None and self.omega_p is not None:
            implied = abs(self.omega_p / self.delta_p)
            if abs(implied - self.lam) > 1e-9:
                logger.warning("lambda=%.4g overrides omega_p/delta_p=%.4g", self.lam, implied)

    @property
    def drive_lambda(self) -> float:
        return self.lam if self.lam is not None else abs(self.omega_p / self.delta_p)

    @property
    def chi0(self) -> float:
        return self.g_p ** 2 / self.delta_p


@dataclass(frozen=True)
class ThreeSiteFullSpec:
    g12: float
    g13: float
    g23: float
    omega_d: float
    phis: tuple[float, float] = (0.0, 0.0)
    qubits: tuple[PQubitSpec, PQubitSpec] | None = None
    K: tuple[float, float] | None = None
    mode: ThreeSiteMode = ThreeSiteMode.QUBIT_ELIMINATED
    boson_dim: int = 3
    kappa: float = 0.0
    stark_compensated: bool = True
    modulation: Modulation = Modulation.FIRST_HARMONIC

    def __post_init__(self):
        object.__setattr__(self, "mode", ThreeSiteMode(self.mode))
        object.__setattr__(self, "modulation", Modulation(self.modulation))
        object.__setattr__(self, "phis", tuple(float(p) for p in self.phis))
        if self.omega_d == 0:
            raise ValidationError("omega_d must be non-zero")
        if int(self.boson_dim) < 2:
            raise ValidationError(f"boson_dim must be >= 2, got {self.boson_dim}")
        if self.kappa < 0:
            raise ValidationError(f"kappa must be >= 0, got {self.kappa}")
        if len(self.phis) != 2:
            raise ValidationError("phis needs one drive phase per modulated cavity")
        if self.qubits is not None and len(self.qubits) != 2:
            raise ValidationError(f"expected 2 p-qubits, got {len(self.qubits)}")
        if self.mode is ThreeSiteMode.WITH_QUBITS and self.qubits is None:
            raise ValidationError("with_qubits mode needs p-qubit parameters (g_p, delta_p, lam or omega_p)")
        if self.qubits is None and self.K is None:
            raise ValidationError("give either p-qubit parameters or the drive strengths K")
        if self.modulation is Modulation.DRESSED and self.qubits is None:
            raise ValidationError("dressed modulation needs p-qubit parameters")

    def drive(self, i: int) -> DriveSpec:
        return DriveSpec(lam=self.qubits[i].drive_lambda, omega_d=self.omega_d, phi=self.phis[i])

    def with_flux(self, flux: float) -> "ThreeSiteFullSpec":
        """Split the loop flux symmetrically: phi1 = -flux/2, phi2 = +flux/2."""
        return replace(self, phis=(-0.5 * flux, 0.5 * flux))


def drive_strength_pair(spec: ThreeSiteFullSpec) -> tuple[float, float]:
    if spec.K is not None:
        return float(spec.K[0]), float(spec.K[1])
    out = []
    for i, q in enumerate(spec.qubits):
        h = chi_harmonics(spec.drive(i), n_max=1)
        out.append(float(drive_strengths(q.chi0, spec.omega_d, h)[0]))
    return out[0], out[1]


def effective_lattice(spec: ThreeSiteFullSpec) -> GaugeLattice:
    k1, k2 = drive_strength_pair(spec)
    lattice = three_site_effective(spec.g12, spec.g13, spec.g23, spec.omega_d, k1, k2, *spec.phis)
    if spec.kappa > 0:
        lattice = lattice.with_losses((spec.kappa,) * 3)
    return lattice


def modulation_harmonics(spec: ThreeSiteFullSpec) -> np.ndarray:
    """Complex on-site harmonics, shape (3, n): cavity i carries sum_n Re(m[i, n-1] exp(2 pi i n omega_d t))."""
    if spec.modulation is Modulation.DRESSED:
        rows = [dressed_modulation(q.g_p, q.delta_p, spec.drive(i), n_max=DRESSED_HARMONICS).harmonics
                for i, q in enumerate(spec.qubits)]
        return np.vstack(rows + [np.zeros(DRESSED_HARMONICS, dtype=complex)])
    k1, k2 = drive_strength_pair(spec)
    first = np.array([k1 * np.exp(1j * spec.phis[0]), k2 * np.exp(1j * spec.phis[1]), 0.0]) * spec.omega_d
    return first[:, None]


@dataclass(frozen=True)
class SingleParticleModel:
    """H(t) = static + diag(sum_n Re(modulation[:, n-1] exp(2 pi i n omega_d t))), all in MHz."""
    static: np.ndarray
    modulation: np.ndarray
    omega_d: float
    frame: np.ndarray

    @property
    def period(self) -> float:
        return 1.0 / abs(self.omega_d)

    def onsite(self, times) -> np.ndarray:
        """Modulated on-site energies, shape (len(times), 3)."""
        t = np.atleast_1d(np.asarray(times, dtype=float))
        n = np.arange(1, self.modulation.shape[1] + 1)
        rotation = np.exp(1j * TWO_PI * self.omega_d * np.multiply.outer(t, n))
        return np.real(rotation @ self.modulation.T)

    def hamiltonian(self, t: float) -> np.ndarray:
        return self.static + np.diag(self.onsite(t)[0])

    def steps_per_period(self, step_factor: int, extra_scale: float = 0.0) -> int:
        fastest = abs(self.omega_d) * self.modulation.shape[1]
        scale = max(np.linalg.norm(self.static, 2) + np.sum(np.abs(self.modulation)) + extra_scale, fastest)
        return int(math.ceil(self.period * step_factor * scale))


def period_propagators(sp: SingleParticleModel, step_factor: int = DEFAULT_STEP_FACTOR) -> np.ndarray:
    """RK4 propagators U(t_j, 0) at every step t_j of one modulation period."""
    n_steps = sp.steps_per_period(step_factor)
    h = sp.period / n_steps
    tau = 0.5 * h * np.arange(2 * n_steps + 1)
    gen = np.repeat((-1j * TWO_PI * sp.static)[None].astype(complex), tau.size, axis=0)
    diag = np.arange(sp.static.shape[0])
    gen[:, diag, diag] += -1j * TWO_PI * sp.onsite(tau)
    return rk4_maps(gen, h)


def _floquet_generator(one_period: np.ndarray, period: float) -> np.ndarray:
    return 1j * logm(one_period) / (TWO_PI * period)


def floquet_hamiltonian(sp: SingleParticleModel, step_factor: int = DEFAULT_STEP_FACTOR) -> np.ndarray:
    """i log U(T) / (2 pi T): the stroboscopic Floquet Hamiltonian from t = 0, cavity 3 in its rotating frame."""
    return _floquet_generator(period_propagators(sp, step_factor)[-1], sp.period)


def floquet_average(sp: SingleParticleModel, step_factor: int = DEFAULT_STEP_FACTOR) -> np.ndarray:
    """
    Floquet Hamiltonian averaged over the start time of the period, in the frame of sp.frame.

    The start-time dependence (micromotion) enters at first order and averages out. The frame
    rotation is undone first.
    """
    maps = period_propagators(sp, step_factor)
    h_f = _floquet_generator(maps[-1], sp.period)
    starts = maps[:-1]
    times = sp.period * np.arange(starts.shape[0]) / starts.shape[0]
    unwind = np.exp(1j * TWO_PI * np.multiply.outer(times, sp.frame))
    shifted = starts @ h_f @ np.linalg.inv(starts)
    return np.mean(shifted * unwind[:, :, None] * unwind.conj()[:, None, :], axis=0)


def floquet_onsite(sp: SingleParticleModel, step_factor: int = DEFAULT_STEP_FACTOR) -> np.ndarray:
    """Diagonal of floquet_average: the residual on-site energies."""
    return np.real(np.diagonal(floquet_average(sp, step_factor)))


def _static_matrix(spec: ThreeSiteFullSpec, onsite) -> np.ndarray:
    g = np.array([[0.0, spec.g12, spec.g13],
                  [spec.g12, 0.0, spec.g23],
                  [spec.g13, spec.g23, 0.0]])
    return g + np.diag(onsite)


def _frame(spec: ThreeSiteFullSpec) -> np.ndarray:
    return np.array([0.0, 0.0, spec.omega_d])


def onsite_energies(spec: ThreeSiteFullSpec) -> np.ndarray:
    """
    Static on-site energies of cavities 1..3 in the frame of cavities 1 and 2.

    Uncompensated: (0, 0, omega_d). Compensated: shifted until the period-averaged Floquet
    Hamiltonian has zero diagonal. with_qubits calibrates on the dressed qubit-eliminated model.
    """
    onsite = _frame(spec)
    if not spec.stark_compensated:
        return onsite
    model_spec = spec
    if spec.mode is ThreeSiteMode.WITH_QUBITS:
        model_spec = replace(spec, mode=ThreeSiteMode.QUBIT_ELIMINATED, modulation=Modulation.DRESSED)
    modulation = modulation_harmonics(model_spec)
    residual = np.full(3, math.inf)
    for _ in range(CALIBRATION_ITERATIONS):
        sp = SingleParticleModel(static=_static_matrix(spec, onsite), modulation=modulation,
                                 omega_d=spec.omega_d, frame=_frame(spec))
        residual = floquet_onsite(sp)
        onsite = onsite - residual
        if np.max(np.abs(residual)) < CALIBRATION_TOLERANCE:
            logger.debug("on-site compensation %s MHz", onsite - _frame(spec))
            return onsite
    raise ConvergenceError(f"on-site calibration still off by {np.max(np.abs(residual)):.3g} MHz "
                           f"after {CALIBRATION_ITERATIONS} iterations")


def single_particle(spec: ThreeSiteFullSpec) -> SingleParticleModel:
    """The qubit-eliminated model as a 3x3 time-periodic matrix."""
    return SingleParticleModel(static=_static_matrix(spec, onsite_energies(spec)),
                               modulation=modulation_harmonics(spec), omega_d=spec.omega_d, frame=_frame(spec))


def build_three_site(spec: ThreeSiteFullSpec) -> TimeDependentModel:
    cavities = [SubsystemSpec.boson(spec.boson_dim, f"b{i + 1}") for i in range(3)]
    if spec.mode is ThreeSiteMode.QUBIT_ELIMINATED:
        space = build_space(cavities)
        sp = single_particle(spec)
        driven = tuple(
            DrivenTerm(operator=float(abs(m)) * mode_operator(space, i, OperatorKind.NUMBER),
                       envelope=cosine_envelope(n * spec.omega_d, float(np.angle(m))),
                       frequency=n * abs(spec.omega_d))
            for i in range(2) for n, m in enumerate(sp.modulation[i], start=1) if m != 0)
        return TimeDependentModel(space, (quadratic_form(space, [0, 1, 2], sp.static),), driven)

    space = build_space(cavities + [SubsystemSpec.qubit("p1"), SubsystemSpec.qubit("p2")])
    # the qubits' average dressed shifts of cavities 1 and 2 are compensated
    shifts = [adiabatic_shift(q.g_p, q.delta_p, spec.drive(i)) for i, q in enumerate(spec.qubits)]
    onsite = onsite_energies(spec) - np.array([shifts[0], shifts[1], 0.0])
    static = [quadratic_form(space, [0, 1, 2], _static_matrix(spec, onsite))]
    driven = []
    for i, q in enumerate(spec.qubits):
        b = mode_operator(space, i, OperatorKind.LOWER)
        nq = mode_operator(space, 3 + i, OperatorKind.NUMBER)
        sm = mode_operator(space, 3 + i, OperatorKind.SIGMA_MINUS)
        static.append(-q.delta_p * nq)
        static.append(q.g_p * (sm @ b.dag() + sm.dag() @ b))
        driven.append(DrivenTerm(operator=-q.drive_lambda * q.delta_p * nq,
                                 envelope=cosine_envelope(spec.omega_d, spec.phis[i]),
                                 frequency=abs(spec.omega_d)))
    return TimeDependentModel(space, tuple(static), tuple(driven))


def observables(spec: ThreeSiteFullSpec, model: TimeDependentModel) -> dict:
    out = {f"P{i + 1}": mode_operator(model.space, i, OperatorKind.NUMBER) for i in range(3)}
    if spec.mode is ThreeSiteMode.WITH_QUBITS:
        out["Pe1"] = mode_operator(model.space, 3, OperatorKind.NUMBER)
        out["Pe2"] = mode_operator(model.space, 4, OperatorKind.NUMBER)
    return out


def initial_state(spec: ThreeSiteFullSpec, model: TimeDependentModel) -> np.ndarray:
    """One phonon in cavity 1; with explicit qubits it is dressed by p-qubit 1."""
    bare = basis_state(model.space, {0: 1})
    if spec.mode is ThreeSiteMode.QUBIT_ELIMINATED:
        return bare
    return dressed_state(model, bare, basis_state(model.space, {3: 1}))


def run_three_site(spec: ThreeSiteFullSpec, t_max: float, *, step_factor: int = DEFAULT_STEP_FACTOR,
                   samples_per_period: int = 8) -> Trajectory:
    """Evolve one phonon injected in cavity 1, all qubits in |g>."""
    model = build_three_site(spec)
    t_grid = output_grid(t_max, spec.omega_d, samples_per_period)
    traj = evolve(model, initial_state(spec, model), t_grid, observables(spec, model), step_factor=step_factor)
    traj.meta.update(mode=spec.mode.value, phis=spec.phis)
    return traj


@dataclass(frozen=True)
class CirculationReport:
    peak_times: dict[int, float | None]
    order: tuple[int, int, int]
    direction: str
    flux: float
    period: float


def circulation_period(spec: ThreeSiteFullSpec) -> float:
    """Revival time 1/(sqrt(3) J) of a uniform chiral triangle with the mean effective hopping."""
    mean_j = float(np.mean([h.amplitude for h in effective_lattice(spec).hoppings]))
    if mean_j <= 0:
        raise ValidationError("effective hoppings vanish; no circulation")
    return 1.0 / (math.sqrt(3.0) * mean_j)


def classify(times: np.ndarray, p2: np.ndarray, p3: np.ndarray, period: float, drive_period: float,
             flux: float = 0.0) -> CirculationReport:
    t2 = first_peak(times, period_average(times, p2, drive_period), PEAK_HEIGHT)
    t3 = first_peak(times, period_average(times, p3, drive_period), PEAK_HEIGHT)
    tie = TIE_FRACTION * period
    if t2 is None and t3 is None:
        direction = "none"
    elif t3 is None or (t2 is not None and t2 < t3 - tie):
        direction = "ccw"
    elif t2 is None or t3 < t2 - tie:
        direction = "cw"
    else:
        direction = "none"
    order = (1, 3, 2) if direction == "cw" else (1, 2, 3)
    return CirculationReport(peak_times={1: 0.0, 2: t2, 3: t3}, order=order, direction=direction,
                             flux=flux, period=period)


def chiral_circulation(spec: ThreeSiteFullSpec, flux: float, t_max: float, *,
                       step_factor: int = DEFAULT_STEP_FACTOR) -> tuple[CirculationReport, Trajectory]:
    """Inject a phonon in cavity 1 and read the circulation sense from the first peaks in 2 and 3."""
    spec = spec.with_flux(flux)
    period = circulation_period(spec)
    if t_max < period:
        raise ValidationError(f"t_max={t_max:.4g} us is shorter than one circulation period ({period:.4g} us)")
    traj = run_three_site(spec, t_max, step_factor=step_factor)
    report = classify(traj.times, traj["P2"], traj["P3"], period, 1.0 / abs(spec.omega_d), flux)
    logger.info("flux %.4g rad: peaks %s -> %s", flux, report.peak_times, report.direction)
    return report, traj
