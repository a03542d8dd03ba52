from floqlat.floquet.couplings import (DispersiveSpec, MediatedCoupling, bessel_hopping, dispersive_shift,
                                       drive_strengths, kerr_dispersive_shift, mediated_coupling,
                                       renormalized_detuning, sideband_resonant_detuning, sideband_weights,
                                       stark_resonant_detuning)
from floqlat.floquet.harmonics import (DressedModulation, DriveSpec, Harmonics, adiabatic_shift, chi_harmonics,
                                       chi_harmonics_closed_form, dressed_modulation, geometric_ratio,
                                       harmonics_sweep, modulated_shift, reconstruct, wrap_phase)

__all__ = [
    "DispersiveSpec", "MediatedCoupling", "bessel_hopping", "dispersive_shift", "drive_strengths",
    "kerr_dispersive_shift", "mediated_coupling", "renormalized_detuning", "sideband_resonant_detuning",
    "sideband_weights", "stark_resonant_detuning", "DressedModulation", "DriveSpec", "Harmonics",
    "adiabatic_shift", "chi_harmonics", "chi_harmonics_closed_form", "dressed_modulation", "geometric_ratio",
    "harmonics_sweep", "modulated_shift", "reconstruct", "wrap_phase",
]
