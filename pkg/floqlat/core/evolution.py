"""
Time-dependent models and a fixed-step RK4 Schroedinger integrator.

H(t) = sum(static) + sum_k envelope_k(t) * H_k, with every matrix in MHz and
time in us; the right-hand side is -2*pi*i*H(t)|psi>. Steps are fixed so that
identical inputs give bit-identical trajectories.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from floqlat.core.space import (Operator, SpaceDescriptor, SubsystemKind, excitation_number,
                                top_level_projector)
from floqlat.utils.floqlat_exception import ValidationError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
MIN_STEP_FACTOR = 50
DEFAULT_STEP_FACTOR = 100
NORM_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12
LEAKAGE_WARNING = 1e-6

Envelope = Callable[[np.ndarray], np.ndarray]


def cosine_envelope(frequency: float, phase: float = 0.0) -> Envelope:
    """cos(2*pi*frequency*t + phase), frequency in MHz, vectorized over t."""
    omega = TWO_PI * frequency

    def envelope(t):
        return np.cos(omega * np.asarray(t, dtype=float) + phase)

    return envelope


@dataclass(frozen=True)
class DrivenTerm:
    operator: Operator
    envelope: Envelope
    frequency: float = 0.0      # MHz, fastest component of the envelope
    amplitude: float = 1.0      # bound on |envelope(t)|

    def values(self, times: np.ndarray) -> np.ndarray:
        out = np.asarray(self.envelope(times), dtype=float)
        if out.shape != np.shape(times):
            out = np.array([float(self.envelope(t)) for t in times])
        return out


@dataclass(frozen=True)
class TimeDependentModel:
    space: SpaceDescriptor
    static_terms: tuple[Operator, ...] = ()
    driven_terms: tuple[DrivenTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "static_terms", tuple(self.static_terms))
        object.__setattr__(self, "driven_terms", tuple(self.driven_terms))
        for op in list(self.static_terms) + [d.operator for d in self.driven_terms]:
            if op.space != self.space:
                raise ValidationError("model term defined on a different space")

    @cached_property
    def static_matrix(self) -> np.ndarray:
        n = self.space.total_dim
        out = np.zeros((n, n), dtype=complex)
        for op in self.static_terms:
            out += op.matrix
        return out

    def hamiltonian(self, t: float) -> np.ndarray:
        h = self.static_matrix.copy()
        for term in self.driven_terms:
            h += float(term.values(np.array([t]))[0]) * term.operator.matrix
        return h

    def frequency_scale(self) -> float:
        """Fastest frequency in MHz: envelope frequencies or the spectral bound of H."""
        bound = np.linalg.norm(self.static_matrix, 2)
        for term in self.driven_terms:
            bound += abs(term.amplitude) * np.linalg.norm(term.operator.matrix, 2)
        fastest = max([abs(t.frequency) for t in self.driven_terms], default=0.0)
        return float(max(bound, fastest))


@dataclass
class Trajectory:
    times: np.ndarray
    observables: dict[str, np.ndarray]
    norms: np.ndarray
    final_state: np.ndarray | None = None
    excitation: np.ndarray | None = None
    step: float = 0.0
    leakage: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - 1.0)))

    @property
    def excitation_drift(self) -> float:
        if self.excitation is None:
            return 0.0
        return float(np.max(np.abs(self.excitation - self.excitation[0])))

    def __getitem__(self, label: str) -> np.ndarray:
        return self.observables[label]


def step_size(model: TimeDependentModel, step_factor: int = DEFAULT_STEP_FACTOR) -> float:
    scale = model.frequency_scale()
    if scale <= 0:
        return math.inf
    return 1.0 / (step_factor * scale)


def rk4_maps(generators: np.ndarray, h: float) -> np.ndarray:
    """
    Cumulative RK4 propagators of the linear system dy/dt = A(t) y.

    `generators` holds A at every half step, shape (2 n + 1, d, d); the result holds the
    n + 1 maps from the first sample to every full step.
    """
    generators = np.asarray(generators)
    if generators.ndim != 3 or generators.shape[0] % 2 != 1:
        raise ValidationError("generators need shape (2 n + 1, d, d)")
    n_steps = (generators.shape[0] - 1) // 2
    y = np.eye(generators.shape[1], dtype=complex)
    maps = np.empty((n_steps + 1,) + y.shape, dtype=complex)
    maps[0] = y
    for s in range(n_steps):
        j = 2 * s
        k1 = generators[j] @ y
        k2 = generators[j + 1] @ (y + 0.5 * h * k1)
        k3 = generators[j + 1] @ (y + 0.5 * h * k2)
        k4 = generators[j + 2] @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        maps[s + 1] = y
    return maps


def _validate(model: TimeDependentModel, psi: np.ndarray, t_grid: np.ndarray) -> None:
    if psi.shape != (model.space.total_dim,):
        raise ValidationError(f"initial state has shape {psi.shape}, expected ({model.space.total_dim},)")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ValidationError(f"initial state is not normalized (norm {norm:.12g})")
    if t_grid.ndim != 1 or t_grid.size < 2:
        raise ValidationError("t_grid needs at least two points")
    if np.any(np.diff(t_grid) <= 0):
        raise ValidationError("t_grid must be strictly increasing")


def _check_hermitian(model: TimeDependentModel, t_grid: np.ndarray) -> None:
    for t in t_grid:
        h = model.hamiltonian(float(t))
        err = float(np.max(np.abs(h - h.conj().T)))
        if err >= HERMITIAN_TOLERANCE:
            raise ValidationError(f"H(t) is not Hermitian at t={t:.6g} us (error {err:.3g})")


def evolve(model: TimeDependentModel, initial: np.ndarray, t_grid: Sequence[float],
           observables: Mapping[str, Operator], *, dt: float | None = None,
           step_factor: int = DEFAULT_STEP_FACTOR, track_excitation: bool = True) -> Trajectory:
    """
    Integrate i d|psi>/dt = 2*pi*H(t)|psi> with classical RK4.

    Parameters
    ----------
    model : TimeDependentModel
        Hamiltonian in MHz.
    initial : numpy.ndarray
        Normalized state at t_grid[0].
    t_grid : sequence of float
        Strictly increasing output times in us.
    observables : mapping
        label -> Operator; expectation values are recorded at every grid point.
    dt : float, optional
        Explicit step in us. Must not exceed 1/(50 * frequency scale).
    step_factor : int
        Used when dt is not given: dt = 1/(step_factor * frequency scale).

    Returns
    -------
    Trajectory
    """
    psi = np.array(initial, dtype=complex)
    t_grid = np.asarray(t_grid, dtype=float)
    _validate(model, psi, t_grid)
    _check_hermitian(model, t_grid)

    dt_max = step_size(model, MIN_STEP_FACTOR)
    if dt is None:
        if step_factor < MIN_STEP_FACTOR:
            raise ValidationError(f"step_factor must be >= {MIN_STEP_FACTOR}, got {step_factor}")
        dt = step_size(model, step_factor)
    elif dt > dt_max:
        raise ValidationError(f"dt={dt:.3g} us exceeds the stability bound {dt_max:.3g} us")

    ops = dict(observables)
    n_obs = excitation_number(model.space) if track_excitation else None
    leak_ops = [top_level_projector(model.space, i) for i in model.space.indices(SubsystemKind.BOSON)]

    a0 = -1j * TWO_PI * model.static_matrix
    a_k = [-1j * TWO_PI * term.operator.matrix for term in model.driven_terms]

    records = {label: np.empty(t_grid.size) for label in ops}
    norms = np.empty(t_grid.size)
    excitation = np.empty(t_grid.size) if n_obs is not None else None
    leakage = 0.0

    def record(k: int, state: np.ndarray) -> None:
        nonlocal leakage
        for label, op in ops.items():
            records[label][k] = op.expectation(state)
        norms[k] = np.linalg.norm(state)
        if excitation is not None:
            excitation[k] = n_obs.expectation(state)
        for p in leak_ops:
            leakage = max(leakage, p.expectation(state))

    record(0, psi)
    smallest = dt
    for k in range(t_grid.size - 1):
        t0, t1 = t_grid[k], t_grid[k + 1]
        n_sub = max(1, int(math.ceil((t1 - t0) / dt - 1e-9)))
        h = (t1 - t0) / n_sub
        smallest = min(smallest, h)
        # envelope samples at every half step of this interval
        half_times = t0 + 0.5 * h * np.arange(2 * n_sub + 1)
        env = [term.values(half_times) for term in model.driven_terms]

        def generator(j: int) -> np.ndarray:
            m = a0
            for a, f in zip(a_k, env):
                m = m + f[j] * a
            return m

        m_start = generator(0)
        for s in range(n_sub):
            j = 2 * s
            m_mid = generator(j + 1)
            m_end = generator(j + 2)
            k1 = m_start @ psi
            k2 = m_mid @ (psi + 0.5 * h * k1)
            k3 = m_mid @ (psi + 0.5 * h * k2)
            k4 = m_end @ (psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            m_start = m_end
        record(k + 1, psi)

    if leakage > LEAKAGE_WARNING:
        logger.warning("population in the top Fock level reached %.3g; increase boson_dim", leakage)

    traj = Trajectory(times=t_grid, observables=records, norms=norms, final_state=psi,
                      excitation=excitation, step=smallest, leakage=leakage)
    logger.debug("evolved %d grid points with dt=%.3g us (norm drift %.3g)",
                 t_grid.size, smallest, traj.max_norm_drift)
    return traj
