from floqlat.common.sweep import SweepResult
from floqlat.transport.floquet_transport import FloquetTransmission, floquet_transmission, floquet_transmission_sweep
from floqlat.transport.scattering import (ScatteringResult, ab_interference, ab_lattice, circulator_fidelity,
                                          scattering_matrix, transmission_sweep)

__all__ = [
    "SweepResult", "FloquetTransmission", "floquet_transmission", "floquet_transmission_sweep",
    "ScatteringResult", "ab_interference", "ab_lattice", "circulator_fidelity", "scattering_matrix",
    "transmission_sweep",
]
