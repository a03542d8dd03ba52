from floqlat.core.space import (Operator, OperatorKind, SpaceDescriptor, SubsystemKind, SubsystemSpec, basis_state,
                                build_space, commutator, excitation_number, identity, mode_operator, quadratic_form)
from floqlat.core.evolution import (DrivenTerm, TimeDependentModel, Trajectory, cosine_envelope, evolve, rk4_maps,
                                    step_size)

__all__ = [
    "Operator", "OperatorKind", "SpaceDescriptor", "SubsystemKind", "SubsystemSpec", "basis_state", "build_space",
    "commutator", "excitation_number", "identity", "mode_operator", "quadratic_form",
    "DrivenTerm", "TimeDependentModel", "Trajectory", "cosine_envelope", "evolve", "rk4_maps", "step_size",
]
