from floqlat.lattice.gauge_lattice import (FluxReport, GaugeLattice, Hopping, cycle_basis, gauge_transform,
                                           is_time_reversal_symmetric, loop_flux, real_gauge, solve_gauge,
                                           trs_invariant, uniform_gauge)
from floqlat.lattice.ladder import (Boundary, LadderSpec, bloch_bands_closed_form, commensurate_momenta,
                                    ladder_bloch_spectrum, ladder_hamiltonian, ladder_lattice, open_spectrum,
                                    plaquette_cycles)
from floqlat.lattice.models import ab_effective, three_site_effective, two_site_effective

__all__ = [
    "FluxReport", "GaugeLattice", "Hopping", "cycle_basis", "gauge_transform", "is_time_reversal_symmetric",
    "loop_flux", "real_gauge", "solve_gauge", "trs_invariant", "uniform_gauge", "Boundary", "LadderSpec",
    "bloch_bands_closed_form", "commensurate_momenta", "ladder_bloch_spectrum", "ladder_hamiltonian",
    "ladder_lattice", "open_spectrum", "plaquette_cycles", "ab_effective", "three_site_effective",
    "two_site_effective",
]
