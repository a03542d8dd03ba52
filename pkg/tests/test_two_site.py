"""Tests for floqlat.dynamics.two_site: the driven cavity-cavity-qubit model and its bridged lattice."""
import logging
from dataclasses import replace

import numpy as np
import pytest

from floqlat.core.evolution import evolve
from floqlat.dynamics.two_site import (TwoSiteFullSpec, build_two_site_full, cavity2_energy, effective_constants,
                                       initial_state, observables, output_grid, rabi_compare)
from floqlat.utils.floqlat_exception import ValidationError


@pytest.fixture(scope="module")
def comparison(fig3_spec):
    return rabi_compare(fig3_spec, 4.4)


@pytest.fixture(scope="module")
def first_harmonic_comparison(fig3_spec):
    return rabi_compare(fig3_spec, 4.4, hopping="first_harmonic")


class TestSpec:
    """Parameter validation."""

    def test_needs_drive(self):
        with pytest.raises(ValidationError, match="lam or omega_p"):
            TwoSiteFullSpec(g12=1.0, g_p=60.0, delta_p=600.0, omega_d=15.0)

    def test_omega_p_sets_lambda(self):
        spec = TwoSiteFullSpec(g12=1.0, g_p=60.0, delta_p=600.0, omega_d=15.0, omega_p=150.0)
        assert spec.drive_lambda == pytest.approx(0.25)

    def test_lambda_overrides_omega_p(self, caplog):
        with caplog.at_level(logging.WARNING, logger="floqlat.dynamics.two_site"):
            spec = TwoSiteFullSpec(g12=1.0, g_p=60.0, delta_p=600.0, omega_d=15.0, omega_p=150.0, lam=0.5)
        assert spec.drive_lambda == 0.5
        assert "overrides" in caplog.text

    @pytest.mark.parametrize("field,value,match", [
        ("boson_dim", 1, "boson_dim"),
        ("omega_d", 0.0, "omega_d"),
        ("resonance_sign", 0, "resonance_sign"),
        ("initial", "thermal", "initial"),
    ])
    def test_rejects(self, fig3_spec, field, value, match):
        with pytest.raises(ValidationError, match=match):
            replace(fig3_spec, **{field: value})

    def test_target_detuning(self, fig3_spec):
        assert fig3_spec.target_detuning == 15.0
        assert replace(fig3_spec, resonance_sign=-1).target_detuning == -15.0
        assert replace(fig3_spec, delta12=-15.0).target_detuning == 15.0


class TestEffectiveConstants:

    def test_bridge_values(self, fig3_spec):
        c = effective_constants(fig3_spec)
        assert c.lam == 0.5
        assert c.chi0 == pytest.approx(6.0)
        assert c.c0 == pytest.approx(1.1547005, abs=1e-7)
        assert c.K1 == pytest.approx(0.2475, abs=1e-3)
        assert c.J12 == pytest.approx(0.1238, abs=1e-3)

    def test_opposite_resonance_flips_phase(self, fig3_spec):
        c = effective_constants(replace(fig3_spec, phi=0.7, resonance_sign=-1))
        assert c.lattice.edge_phase(0, 1) == pytest.approx(-0.7)
        assert effective_constants(replace(fig3_spec, phi=0.7)).lattice.edge_phase(0, 1) == pytest.approx(0.7)

    def test_harmonic_coupler_kills_hopping(self, fig3_spec):
        assert effective_constants(fig3_spec, kerr=0.0).J12 == 0.0

    def test_bessel_amplitude_is_smaller(self, fig3_spec):
        assert effective_constants(fig3_spec, bessel=True).J12 < effective_constants(fig3_spec).J12

    def test_dressed_hopping(self, fig3_spec):
        c = effective_constants(fig3_spec)
        # the exact dressed modulation trims the first-harmonic value by several percent
        assert 0.105 < c.J12_dressed < c.J12
        lattice = c.dressed_lattice()
        assert lattice.hoppings[0].amplitude == c.J12_dressed
        assert lattice.edge_phase(0, 1) == pytest.approx(c.lattice.edge_phase(0, 1))

    def test_resonant_sideband(self, fig3_spec):
        assert fig3_spec.resonant_sideband == 1
        assert replace(fig3_spec, resonance_sign=-1).resonant_sideband == -1
        assert replace(fig3_spec, omega_d=-15.0).resonant_sideband == 1


class TestFullModel:
    """Construction of the three-mode Hamiltonian."""

    def test_cavity2_energy(self, fig3_spec):
        dressed = fig3_spec.dressed()
        bare = cavity2_energy(fig3_spec) - dressed.mean
        # every sideband but the resonant m = 1 repels the pair; the dressed gap lands on omega_d
        repulsion = sum(2.0 * abs(fig3_spec.g12 * a) ** 2 / (bare - m * 15.0)
                        for m, a in dressed.sidebands.items() if m != 1)
        assert bare + repulsion == pytest.approx(15.0, rel=1e-10)
        assert bare < 15.0

    def test_hermitian_and_dimension(self, fig3_spec):
        model = build_two_site_full(fig3_spec)
        assert model.space.total_dim == 18
        for t in (0.0, 0.013, 0.05):
            h = model.hamiltonian(t)
            np.testing.assert_allclose(h, h.conj().T, atol=1e-12)

    def test_dressed_initial_state(self, fig3_spec):
        model = build_two_site_full(fig3_spec)
        psi = initial_state(fig3_spec, model)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        # index of |1, 0, g> in the (3, 3, 2) product basis
        assert abs(psi[6]) ** 2 > 0.99
        assert abs(psi[6]) ** 2 < 1.0

    def test_bare_initial_state(self, fig3_spec):
        spec = replace(fig3_spec, initial="bare")
        psi = initial_state(spec, build_two_site_full(spec))
        assert abs(psi[6]) == 1.0

    def test_output_grid(self):
        grid = output_grid(1.0, 15.0)
        assert grid[0] == 0.0 and grid[-1] == 1.0
        assert np.max(np.diff(grid)) <= 1.0 / (15.0 * 8) + 1e-12
        with pytest.raises(ValidationError, match="t_max"):
            output_grid(0.0, 15.0)


@pytest.mark.slow
class TestRabiComparison:
    """Full model follows the dressed bridged hopping over two swaps."""

    def test_effective_swap_time(self, comparison):
        j12 = comparison.constants.J12_dressed
        assert comparison.effective.meta["J12"] == j12
        assert comparison.swap_time_effective == pytest.approx(1.0 / (4.0 * j12), rel=0.01)

    def test_full_swap_time(self, comparison):
        assert comparison.swap_time_full is not None
        assert comparison.swap_time_full == pytest.approx(comparison.swap_time_effective, rel=0.03)
        assert comparison.swap_time_full == pytest.approx(1.0 / (4.0 * comparison.constants.J12), rel=0.1)

    def test_transfer_is_complete(self, comparison):
        assert np.max(comparison.full["P2"]) > 0.95

    def test_qubit_stays_virtual(self, comparison):
        assert comparison.max_excited < 0.05

    def test_deviation(self, comparison):
        assert comparison.max_deviation < 0.1

    def test_dressed_hopping_beats_first_harmonic(self, comparison, first_harmonic_comparison):
        assert first_harmonic_comparison.effective.meta["hopping"] == "first_harmonic"
        assert first_harmonic_comparison.max_deviation > comparison.max_deviation

    def test_conservation(self, fig3_spec):
        model = build_two_site_full(fig3_spec)
        traj = evolve(model, initial_state(fig3_spec, model), output_grid(0.5, 15.0), observables(model.space),
                      step_factor=400)
        assert traj.max_norm_drift < 1e-8
        assert traj.excitation_drift < 1e-8

    def test_unknown_hopping(self, fig3_spec):
        with pytest.raises(ValidationError, match="hopping"):
            rabi_compare(fig3_spec, 1.0, hopping="bessel")
