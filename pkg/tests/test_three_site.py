"""Tests for floqlat.dynamics.three_site: the modulated loop and chiral phonon circulation."""
import logging
import math
from dataclasses import replace

import numpy as np
import pytest

from floqlat.core.evolution import TimeDependentModel, evolve
from floqlat.core.space import OperatorKind, SubsystemSpec, basis_state, build_space, mode_operator, quadratic_form
from floqlat.dynamics.three_site import (Modulation, PQubitSpec, ThreeSiteFullSpec, ThreeSiteMode, build_three_site,
                                         chiral_circulation, circulation_period, classify, drive_strength_pair,
                                         effective_lattice, floquet_average, floquet_hamiltonian, floquet_onsite,
                                         modulation_harmonics, onsite_energies, run_three_site, single_particle)
from floqlat.lattice.gauge_lattice import GaugeLattice, Hopping, loop_flux
from floqlat.utils.floqlat_exception import ValidationError


@pytest.fixture(scope="module")
def fast_spec(fig5_spec):
    """Single-phonon runs never need more than two Fock levels."""
    return replace(fig5_spec, boson_dim=2)


@pytest.fixture(scope="module")
def circulation(fast_spec):
    """Report and trajectory per loop flux."""
    return {flux: chiral_circulation(fast_spec, flux, 6.0) for flux in (math.pi / 2, -math.pi / 2, 0.0)}


class TestSpec:

    def test_with_flux_splits_symmetrically(self, fig5_spec):
        assert fig5_spec.phis == pytest.approx((-math.pi / 4, math.pi / 4))

    def test_needs_drive_source(self):
        with pytest.raises(ValidationError, match="drive strengths"):
            ThreeSiteFullSpec(g12=0.042, g13=1.1, g23=1.1, omega_d=-20.0)

    def test_with_qubits_needs_qubits(self):
        with pytest.raises(ValidationError, match="p-qubit parameters"):
            ThreeSiteFullSpec(g12=0.042, g13=1.1, g23=1.1, omega_d=-20.0, K=(0.1, 0.1), mode="with_qubits")

    def test_qubit_needs_drive(self):
        with pytest.raises(ValidationError, match="lam or omega_p"):
            PQubitSpec(g_p=60.0, delta_p=600.0)

    @pytest.mark.parametrize("field,value", [("omega_d", 0.0), ("boson_dim", 1), ("kappa", -0.1)])
    def test_rejects(self, fig5_spec, field, value):
        with pytest.raises(ValidationError):
            replace(fig5_spec, **{field: value})

    def test_explicit_strengths(self):
        spec = ThreeSiteFullSpec(g12=0.042, g13=1.1, g23=1.1, omega_d=-20.0, K=(-0.2, -0.1))
        assert drive_strength_pair(spec) == (-0.2, -0.1)


class TestEffectiveLattice:
    """Triangle amplitudes and enclosed flux at the circulator working point."""

    def test_amplitudes(self, fig5_spec):
        amps = {(h.i, h.j): h.amplitude for h in effective_lattice(fig5_spec).hoppings}
        assert amps[(0, 1)] == pytest.approx(0.1025)
        assert amps[(1, 2)] == pytest.approx(0.1021, abs=1e-3)
        assert amps[(2, 0)] == pytest.approx(0.1021, abs=1e-3)

    def test_flux(self, fig5_spec):
        assert loop_flux(effective_lattice(fig5_spec), [0, 1, 2]).flux == pytest.approx(math.pi / 2)

    def test_losses(self, fig5_spec):
        assert effective_lattice(replace(fig5_spec, kappa=0.2)).losses == (0.2, 0.2, 0.2)

    def test_period(self, fig5_spec):
        assert circulation_period(fig5_spec) == pytest.approx(5.65, rel=0.01)


class TestModels:

    def test_uncompensated_onsite(self, fig5_spec):
        np.testing.assert_array_equal(onsite_energies(replace(fig5_spec, stark_compensated=False)),
                                      [0.0, 0.0, -20.0])

    def test_compensated_onsite(self, fig5_spec):
        onsite = onsite_energies(fig5_spec)
        # the sidebands push cavities 1 and 2 up by about g13^2 / |omega_d| and cavity 3 down by twice that
        assert onsite[0] == pytest.approx(onsite[1], abs=1e-3)
        assert -0.1 < onsite[0] < -0.02
        assert -20.0 < onsite[2] < -19.8

    def test_calibrated_floquet_diagonal_vanishes(self, fig5_spec):
        assert np.max(np.abs(floquet_onsite(single_particle(fig5_spec)))) < 1e-8

    def test_floquet_hamiltonian_matches_lattice(self, fig5_spec):
        sp = single_particle(fig5_spec)
        stroboscopic = floquet_hamiltonian(sp)
        np.testing.assert_allclose(stroboscopic, stroboscopic.conj().T, atol=1e-9)
        h_f = floquet_average(sp)
        h_eff = effective_lattice(fig5_spec).hopping_matrix()
        links = ([0, 1, 2], [1, 2, 0])
        # second-order corrections trim each hopping by under 2 percent
        np.testing.assert_allclose(np.abs(h_f[links]), np.abs(h_eff[links]), atol=3e-3)
        flux = np.angle(h_f[0, 1] * h_f[1, 2] * h_f[2, 0])
        assert flux == pytest.approx(np.angle(h_eff[0, 1] * h_eff[1, 2] * h_eff[2, 0]), abs=0.02)

    def test_single_particle(self, fig5_spec):
        sp = single_particle(fig5_spec)
        k1, k2 = drive_strength_pair(fig5_spec)
        phis = fig5_spec.phis
        np.testing.assert_allclose(sp.modulation[:, 0], [k1 * -20.0 * np.exp(1j * phis[0]),
                                                         k2 * -20.0 * np.exp(1j * phis[1]), 0.0])
        assert sp.modulation.shape == (3, 1)
        np.testing.assert_allclose(sp.frame, [0.0, 0.0, -20.0])
        np.testing.assert_allclose(np.diag(sp.static), onsite_energies(fig5_spec))
        h = sp.hamiltonian(0.011)
        np.testing.assert_allclose(h, h.conj().T)
        assert sp.period == pytest.approx(0.05)

    def test_dressed_modulation(self, fig5_spec):
        spec = replace(fig5_spec, modulation="dressed")
        assert spec.modulation is Modulation.DRESSED
        harmonics = modulation_harmonics(spec)
        first = modulation_harmonics(fig5_spec)[:, 0]
        assert harmonics.shape == (3, 4)
        np.testing.assert_array_equal(harmonics[2], 0.0)
        np.testing.assert_allclose(np.abs(harmonics[:2, 0]), np.abs(first[:2]), rtol=0.05)
        assert np.abs(harmonics[0, 1]) < np.abs(harmonics[0, 0])
        assert len(build_three_site(spec).driven_terms) == 8

    def test_dressed_modulation_needs_qubits(self):
        with pytest.raises(ValidationError, match="dressed modulation"):
            ThreeSiteFullSpec(g12=0.042, g13=1.1, g23=1.1, omega_d=-20.0, K=(0.1, 0.1), modulation="dressed")

    def test_explicit_qubits_calibrate_on_dressed_model(self, fig5_spec):
        explicit = onsite_energies(replace(fig5_spec, mode=ThreeSiteMode.WITH_QUBITS))
        np.testing.assert_allclose(explicit, onsite_energies(replace(fig5_spec, modulation=Modulation.DRESSED)))

    def test_dimensions(self, fast_spec):
        assert build_three_site(fast_spec).space.total_dim == 8
        assert build_three_site(replace(fast_spec, mode=ThreeSiteMode.WITH_QUBITS)).space.total_dim == 32

    def test_qubit_lambda_overrides_omega_p(self, caplog):
        with caplog.at_level(logging.WARNING, logger="floqlat.dynamics.three_site"):
            qubit = PQubitSpec(g_p=60.0, delta_p=600.0, lam=0.5, omega_p=150.0)
        assert qubit.drive_lambda == 0.5
        assert "overrides" in caplog.text


class TestTriangleSymmetry:
    """A balanced effective triangle mirrors cavities 2 and 3 about the injection site."""

    @staticmethod
    def populations(flux: float, amplitudes=(0.1, 0.1, 0.1)) -> tuple[np.ndarray, np.ndarray]:
        j12, j23, j31 = amplitudes
        lattice = GaugeLattice(3, (Hopping(0, 1, j12, flux / 3), Hopping(1, 2, j23, flux / 3),
                                   Hopping(2, 0, j31, flux / 3)))
        space = build_space([SubsystemSpec.boson(2, f"b{i + 1}") for i in range(3)])
        model = TimeDependentModel(space, (quadratic_form(space, [0, 1, 2], lattice.hopping_matrix()),))
        obs = {f"P{i + 1}": mode_operator(space, i, OperatorKind.NUMBER) for i in range(3)}
        traj = evolve(model, basis_state(space, {0: 1}), np.linspace(0.0, 6.0, 121), obs)
        return traj["P2"], traj["P3"]

    # J12 = J31 keeps the 2 <-> 3 mirror whatever J23 is
    @pytest.mark.parametrize("amplitudes", [(0.1, 0.1, 0.1), (0.05, 0.1, 0.05), (0.1, 0.2, 0.1)])
    def test_zero_flux(self, amplitudes):
        p2, p3 = self.populations(0.0, amplitudes)
        np.testing.assert_allclose(p2, p3, atol=1e-6)

    def test_opposite_flux_mirrors(self):
        p2, _ = self.populations(math.pi / 2)
        _, p3 = self.populations(-math.pi / 2)
        np.testing.assert_allclose(p2, p3, atol=1e-6)


class TestClassify:
    """Direction from synthetic population traces."""

    @pytest.fixture
    def times(self):
        return np.linspace(0.0, 6.0, 601)

    @staticmethod
    def bump(t, center):
        return np.exp(-(t - center) ** 2 / 0.05)

    def test_ccw(self, times):
        report = classify(times, self.bump(times, 1.0), self.bump(times, 2.0), 3.0, 0.05)
        assert report.direction == "ccw"
        assert report.order == (1, 2, 3)
        assert report.peak_times[2] == pytest.approx(1.0, abs=1e-2)

    def test_cw(self, times):
        report = classify(times, self.bump(times, 2.0), self.bump(times, 1.0), 3.0, 0.05)
        assert report.direction == "cw"
        assert report.order == (1, 3, 2)

    def test_tie(self, times):
        report = classify(times, self.bump(times, 2.0), self.bump(times, 2.01), 3.0, 0.05)
        assert report.direction == "none"

    def test_no_peaks(self, times):
        flat = np.full_like(times, 0.1)
        assert classify(times, flat, flat, 3.0, 0.05).direction == "none"


@pytest.mark.slow
class TestChiralCirculation:
    """One phonon injected in cavity 1 circulates with the synthetic flux."""

    def test_positive_flux_is_ccw(self, circulation):
        report, _ = circulation[math.pi / 2]
        assert report.direction == "ccw"
        assert report.peak_times[2] == pytest.approx(1.9, abs=0.3)

    def test_negative_flux_is_cw(self, circulation):
        assert circulation[-math.pi / 2][0].direction == "cw"

    def test_zero_flux_has_no_sense(self, circulation):
        report, traj = circulation[0.0]
        assert report.direction == "none"
        # cavity 2 also has the direct g12 link and cavity 3 is unmodulated, so the mirror is approximate
        assert np.max(np.abs(traj["P2"] - traj["P3"])) < 0.05

    def test_opposite_flux_mirrors(self, circulation):
        _, forward = circulation[math.pi / 2]
        _, backward = circulation[-math.pi / 2]
        assert np.max(np.abs(forward["P2"] - backward["P3"])) < 0.05
        assert np.max(np.abs(forward["P3"] - backward["P2"])) < 0.05

    def test_short_run_rejected(self, fast_spec):
        with pytest.raises(ValidationError, match="circulation period"):
            chiral_circulation(fast_spec, math.pi / 2, 1.0)

    def test_conservation(self, fast_spec):
        traj = run_three_site(fast_spec, 1.0, step_factor=400)
        assert traj.max_norm_drift < 1e-8
        total = traj["P1"] + traj["P2"] + traj["P3"]
        np.testing.assert_allclose(total, 1.0, atol=1e-8)

    def test_explicit_qubits_track_eliminated_model(self, fast_spec):
        t_max = circulation_period(fast_spec)
        full = run_three_site(replace(fast_spec, mode=ThreeSiteMode.WITH_QUBITS), t_max)
        eliminated = run_three_site(replace(fast_spec, modulation=Modulation.DRESSED), t_max)
        for label in ("P1", "P2", "P3"):
            assert np.max(np.abs(full[label] - eliminated[label])) < 0.1
        assert np.max(full["Pe1"]) < 0.05
