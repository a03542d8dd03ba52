from floqlat.dynamics.analysis import first_peak, period_average, refine_peak
from floqlat.dynamics.three_site import (CirculationReport, Modulation, PQubitSpec, SingleParticleModel,
                                         ThreeSiteFullSpec, ThreeSiteMode, build_three_site, chiral_circulation,
                                         circulation_period, classify, drive_strength_pair, effective_lattice,
                                         floquet_average, floquet_hamiltonian, floquet_onsite, modulation_harmonics,
                                         onsite_energies, period_propagators, run_three_site, single_particle)
from floqlat.dynamics.two_site import (EffectiveConstants, RabiComparison, TwoSiteFullSpec, build_two_site_full,
                                       dressed_state, effective_constants, initial_state, rabi_compare)

__all__ = [
    "first_peak", "period_average", "refine_peak", "CirculationReport", "Modulation", "PQubitSpec",
    "SingleParticleModel", "ThreeSiteFullSpec", "ThreeSiteMode", "build_three_site", "chiral_circulation",
    "circulation_period", "classify", "drive_strength_pair", "effective_lattice", "floquet_average",
    "floquet_hamiltonian", "floquet_onsite", "modulation_harmonics", "onsite_energies", "period_propagators",
    "run_three_site", "single_particle", "EffectiveConstants", "RabiComparison", "TwoSiteFullSpec",
    "build_two_site_full", "dressed_state", "effective_constants", "initial_state", "rabi_compare",
]
