"""
Truncated multi-mode Hilbert spaces and dense operator algebra.

Subsystems are ordered; the full space is their Kronecker product with the
first subsystem as the most significant factor. Qubits use the basis order
(|g>, |e>) so that a basis index doubles as the excitation count.

Operator matrices are stored in MHz (ordinary frequency); the integrator
converts to rad/us.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Mapping, Sequence

import numpy as np

from floqlat.utils.floqlat_exception import ValidationError

logger = logging.getLogger(__name__)


class SubsystemKind(str, enum.Enum):
    BOSON = "boson"
    QUBIT = "qubit"


class OperatorKind(str, enum.Enum):
    LOWER = "lower"
    RAISE = "raise"
    NUMBER = "number"
    SIGMA_Z = "sigma_z"
    SIGMA_PLUS = "sigma_plus"
    SIGMA_MINUS = "sigma_minus"


_BOSON_KINDS = {OperatorKind.LOWER, OperatorKind.RAISE, OperatorKind.NUMBER}
_QUBIT_KINDS = {OperatorKind.SIGMA_Z, OperatorKind.SIGMA_PLUS, OperatorKind.SIGMA_MINUS, OperatorKind.NUMBER}


@dataclass(frozen=True)
class SubsystemSpec:
    kind: SubsystemKind
    dim: int
    label: str = ""

    def __post_init__(self):
        kind = SubsystemKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if int(self.dim) < 2:
            raise ValidationError(f"subsystem {self.label or kind.value!r}: dim must be >= 2, got {self.dim}")
        if kind is SubsystemKind.QUBIT and self.dim != 2:
            raise ValidationError(f"qubit {self.label!r} must have dim 2, got {self.dim}")

    @classmethod
    def boson(cls, dim: int = 3, label: str = "") -> "SubsystemSpec":
        return cls(SubsystemKind.BOSON, dim, label)

    @classmethod
    def qubit(cls, label: str = "") -> "SubsystemSpec":
        return cls(SubsystemKind.QUBIT, 2, label)


@dataclass(frozen=True)
class SpaceDescriptor:
    subsystems: tuple[SubsystemSpec, ...]
    total_dim: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        object.__setattr__(self, "total_dim", int(np.prod([s.dim for s in self.subsystems])))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.subsystems)

    def index_of(self, label: str) -> int:
        for i, s in enumerate(self.subsystems):
            if s.label == label:
                return i
        raise ValidationError(f"no subsystem labelled {label!r}")

    def indices(self, kind: SubsystemKind) -> list[int]:
        return [i for i, s in enumerate(self.subsystems) if s.kind is kind]


def build_space(subsystems: Sequence[SubsystemSpec]) -> SpaceDescriptor:
    """Ordered product space of the given subsystems."""
    subsystems = tuple(subsystems)
    if not subsystems:
        raise ValidationError("a space needs at least one subsystem")
    return SpaceDescriptor(subsystems)


@dataclass(frozen=True, eq=False)
class Operator:
    space: SpaceDescriptor
    matrix: np.ndarray

    # numpy scalars defer to our __rmul__
    __array_ufunc__ = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = self.space.total_dim
        if m.shape != (n, n):
            raise ValidationError(f"operator shape {m.shape} does not match space dimension {n}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def _check(self, other: "Operator") -> None:
        if other.space != self.space:
            raise ValidationError("operators live on different spaces")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def hermitian_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermitian_error() < tol

    def expectation(self, psi: np.ndarray) -> float:
        return float(np.real(np.vdot(psi, self.matrix @ psi)))


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


# -------------------- local operators --------------------

def _local_matrix(sub: SubsystemSpec, kind: OperatorKind) -> np.ndarray:
    d = sub.dim
    if sub.kind is SubsystemKind.BOSON:
        lower = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1)
        if kind is OperatorKind.LOWER:
            return lower
        if kind is OperatorKind.RAISE:
            return lower.T
        return np.diag(np.arange(d, dtype=float))
    # qubit basis (|g>, |e>)
    if kind is OperatorKind.SIGMA_Z:
        return np.diag([-1.0, 1.0])
    if kind is OperatorKind.SIGMA_PLUS:
        return np.array([[0.0, 0.0], [1.0, 0.0]])
    if kind is OperatorKind.SIGMA_MINUS:
        return np.array([[0.0, 1.0], [0.0, 0.0]])
    return np.diag([0.0, 1.0])


def embed(space: SpaceDescriptor, index: int, local: np.ndarray) -> np.ndarray:
    """Tensor a local matrix into the full space with identities elsewhere."""
    factors = [local if i == index else np.eye(s.dim) for i, s in enumerate(space.subsystems)]
    return reduce(np.kron, factors)


def mode_operator(space: SpaceDescriptor, index: int, kind: OperatorKind | str) -> Operator:
    """Ladder, number or Pauli operator acting on one subsystem."""
    if not 0 <= index < len(space.subsystems):
        raise ValidationError(f"subsystem index {index} out of range 0..{len(space.subsystems) - 1}")
    try:
        kind = OperatorKind(kind)
    except ValueError as e:
        raise ValidationError(f"unknown operator kind {kind!r}") from e
    sub = space.subsystems[index]
    allowed = _BOSON_KINDS if sub.kind is SubsystemKind.BOSON else _QUBIT_KINDS
    if kind not in allowed:
        raise ValidationError(f"{kind.value} is not defined on {sub.kind.value} subsystem {index}")
    return Operator(space, embed(space, index, _local_matrix(sub, kind)))


def identity(space: SpaceDescriptor) -> Operator:
    return Operator(space, np.eye(space.total_dim))


def zero(space: SpaceDescriptor) -> Operator:
    return Operator(space, np.zeros((space.total_dim, space.total_dim)))


def quadratic_form(space: SpaceDescriptor, modes: Sequence[int], h: np.ndarray) -> Operator:
    """
    Lift a single-particle matrix to the Fock space: sum_ij h[i, j] b_{m_i}^dag b_{m_j}.

    `h` must be Hermitian for the result to be Hermitian; it is used as given.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (len(modes), len(modes)):
        raise ValidationError(f"single-particle matrix shape {h.shape} does not match {len(modes)} modes")
    lowers = [mode_operator(space, m, OperatorKind.LOWER).matrix for m in modes]
    out = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    for i, bi in enumerate(lowers):
        for j, bj in enumerate(lowers):
            if h[i, j] != 0:
                out += h[i, j] * (bi.conj().T @ bj)
    return Operator(space, out)


def excitation_number(space: SpaceDescriptor) -> Operator:
    """Total excitations: bosonic occupations plus excited qubits."""
    total = np.zeros((space.total_dim, space.total_dim))
    for i in range(len(space.subsystems)):
        total = total + mode_operator(space, i, OperatorKind.NUMBER).matrix.real
    return Operator(space, total)


def basis_state(space: SpaceDescriptor, occupations: Mapping[int, int] | None = None) -> np.ndarray:
    """Product Fock state; unspecified subsystems are in their ground level."""
    occupations = dict(occupations or {})
    vectors = []
    for i, sub in enumerate(space.subsystems):
        n = int(occupations.pop(i, 0))
        if not 0 <= n < sub.dim:
            raise ValidationError(f"occupation {n} not representable on subsystem {i} (dim {sub.dim})")
        v = np.zeros(sub.dim, dtype=complex)
        v[n] = 1.0
        vectors.append(v)
    if occupations:
        raise ValidationError(f"unknown subsystem indices {sorted(occupations)}")
    return reduce(np.kron, vectors)


def top_level_projector(space: SpaceDescriptor, index: int) -> Operator:
    """Projector on the highest Fock level of a boson subsystem (leakage monitor)."""
    sub = space.subsystems[index]
    local = np.zeros((sub.dim, sub.dim))
    local[-1, -1] = 1.0
    return Operator(space, embed(space, index, local))
