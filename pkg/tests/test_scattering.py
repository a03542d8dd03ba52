"""Tests for floqlat.transport.scattering: circulator and Aharonov-Bohm transmission."""
import numpy as np
import pytest

from floqlat.lattice.gauge_lattice import (GaugeLattice, Hopping, gauge_transform, is_time_reversal_symmetric,
                                           loop_flux, uniform_gauge)
from floqlat.transport.scattering import (ab_interference, ab_lattice, circulator_fidelity, scattering_matrix,
                                          transmission_sweep)
from floqlat.utils.floqlat_exception import ValidationError

KAPPA = 0.2
SEEDS = range(50)


def loop(flux: float, j: float = KAPPA / 2, kappa: float = KAPPA) -> GaugeLattice:
    lat = GaugeLattice(3, (Hopping(0, 1, j), Hopping(1, 2, j), Hopping(2, 0, j, flux)))
    return uniform_gauge(lat, [0, 1, 2])[0].with_losses((kappa,) * 3)


def random_lattice(seed: int, n_sites: int = 4) -> tuple[GaugeLattice, float]:
    """Fully connected lattice with random hoppings and one shared loss, plus an input detuning."""
    rng = np.random.default_rng(seed)
    hops = tuple(Hopping(i, j, rng.uniform(0.02, 0.3), rng.uniform(-np.pi, np.pi))
                 for i in range(n_sites) for j in range(i + 1, n_sites))
    kappa = rng.uniform(0.1, 0.4)
    return GaugeLattice(n_sites, hops).with_losses((kappa,) * n_sites), rng.uniform(-0.5, 0.5)


def random_triangle(seed: int) -> tuple[GaugeLattice, float]:
    """Even seeds enclose 0 or pi, odd seeds a flux at least 0.2 rad away from both."""
    rng = np.random.default_rng(seed)
    if seed % 2 == 0:
        flux = np.pi * rng.integers(0, 2)
    else:
        flux = rng.choice([-1.0, 1.0]) * rng.uniform(0.2, np.pi - 0.2)
    a, b = rng.uniform(-np.pi, np.pi, size=2)
    hops = (Hopping(0, 1, rng.uniform(0.05, 0.3), a), Hopping(1, 2, rng.uniform(0.05, 0.3), b),
            Hopping(2, 0, rng.uniform(0.05, 0.3), flux - a - b))
    kappa = rng.uniform(0.1, 0.3)
    return GaugeLattice(3, hops).with_losses((kappa,) * 3), rng.uniform(-0.2, 0.2)


class TestCirculator:
    """Ideal three-port circulation at flux pi/2 and J = kappa/2."""

    def test_cyclic_permutation(self):
        result = scattering_matrix(loop(np.pi / 2), 0.0)
        expected = np.zeros((3, 3))
        expected[1, 0] = expected[2, 1] = expected[0, 2] = 1.0
        np.testing.assert_allclose(np.abs(result.S), expected, atol=1e-9)
        assert circulator_fidelity(result, "ccw") == pytest.approx(1.0)
        assert circulator_fidelity(result, "cw") == pytest.approx(0.0, abs=1e-12)

    def test_opposite_flux_reverses(self):
        result = scattering_matrix(loop(-np.pi / 2), 0.0)
        assert circulator_fidelity(result, "cw") == pytest.approx(1.0)
        assert result.transmission(2, 0) == pytest.approx(1.0)

    @pytest.mark.parametrize("delta", [-0.3, 0.0, 0.17])
    def test_unitary_without_internal_loss(self, delta):
        s = scattering_matrix(loop(0.9), delta).S
        np.testing.assert_allclose(s.conj().T @ s, np.eye(3), atol=1e-12)

    @pytest.mark.parametrize("flux,reciprocal", [(0.0, True), (np.pi, True), (np.pi / 2, False), (1.0, False)])
    def test_reciprocity_iff_trs(self, flux, reciprocal):
        t = scattering_matrix(loop(flux), 0.05).transmissions
        assert np.allclose(t, t.T, atol=1e-9) is reciprocal

    @pytest.mark.parametrize("seed", SEEDS)
    def test_unitary_on_random_lattices(self, seed):
        lattice, delta = random_lattice(seed)
        s = scattering_matrix(lattice, delta).S
        np.testing.assert_allclose(s.conj().T @ s, np.eye(lattice.n_sites), atol=1e-10)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_reciprocity_iff_trs_on_random_triangles(self, seed):
        lattice, delta = random_triangle(seed)
        trs = is_time_reversal_symmetric(lattice)
        assert trs is (seed % 2 == 0)
        t = scattering_matrix(lattice, delta).transmissions
        assert np.allclose(t, t.T, rtol=0.0, atol=1e-10) is trs

    @pytest.mark.parametrize("seed", range(10))
    def test_magnitudes_are_gauge_invariant(self, seed):
        lattice, delta = random_lattice(seed)
        phases = np.random.default_rng(seed + 1000).uniform(-np.pi, np.pi, size=lattice.n_sites)
        moved = gauge_transform(lattice, phases)
        flux = [loop_flux(lat, [0, 1, 2]).flux for lat in (moved, lattice)]
        assert np.exp(1j * flux[0]) == pytest.approx(np.exp(1j * flux[1]))
        np.testing.assert_allclose(np.abs(scattering_matrix(moved, delta).S),
                                   np.abs(scattering_matrix(lattice, delta).S), atol=1e-10)

    def test_fidelity_needs_three_ports(self):
        result = scattering_matrix(loop(np.pi / 2), 0.0, ports=(0, 1))
        with pytest.raises(ValidationError, match="3 ports"):
            circulator_fidelity(result)
        with pytest.raises(ValidationError, match="direction"):
            circulator_fidelity(scattering_matrix(loop(0.0), 0.0), "up")


class TestPorts:

    def test_default_ports_are_lossy_sites(self):
        lat = loop(0.0).with_losses((KAPPA, 0.0, KAPPA))
        assert scattering_matrix(lat, 0.0).ports == (0, 2)

    def test_lossless_lattice(self):
        with pytest.raises(ValidationError, match="no lossy site"):
            scattering_matrix(loop(0.0, kappa=0.0), 0.0)

    def test_port_without_loss(self):
        lat = loop(0.0).with_losses((KAPPA, 0.0, KAPPA))
        with pytest.raises(ValidationError, match="kappa = 0"):
            scattering_matrix(lat, 0.0, ports=(0, 1))

    def test_unknown_pair(self):
        result = scattering_matrix(loop(0.0), 0.0, ports=(0, 1))
        with pytest.raises(ValidationError, match="not both ports"):
            result.transmission(2, 0)


class TestTransmissionSweep:

    def test_columns_and_sum_rule(self):
        delta = np.linspace(-0.5, 0.5, 11)
        sweep = transmission_sweep(loop(np.pi / 2), delta, input_port=0, threads=2)
        assert sweep.columns == ["delta_d_MHz", "T1", "T2", "T3"]
        total = sweep.curves["T1"] + sweep.curves["T2"] + sweep.curves["T3"]
        np.testing.assert_allclose(total, 1.0, atol=1e-12)
        assert sweep.curves["T2"][5] == pytest.approx(1.0)
        assert sweep.meta["input_port"] == 1

    def test_input_must_be_port(self):
        lat = loop(0.0).with_losses((KAPPA, 0.0, KAPPA))
        with pytest.raises(ValidationError, match="input port"):
            transmission_sweep(lat, [0.0], input_port=1)


class TestAharonovBohm:
    """Two-path interference through the four-cavity plaquette."""

    def test_destructive_at_half_flux_quantum(self):
        sweep = ab_interference(0.1, 0.2, 0.05, [0.0, np.pi])
        assert sweep.curves["T41"][1] < 1e-20
        assert sweep.curves["T41"][0] > 0.5

    def test_even_in_flux(self):
        flux = np.linspace(-np.pi, np.pi, 9)
        t41 = ab_interference(0.1, 0.2, 0.05, flux).curves["T41"]
        np.testing.assert_allclose(t41, t41[::-1], atol=1e-12)

    def test_maxima_at_zero_and_full_flux_quantum(self):
        flux = np.linspace(0.0, 2 * np.pi, 41)
        t41 = ab_interference(0.1, 0.2, 0.05, flux).curves["T41"]
        assert np.argmax(t41) in (0, 40)
        assert t41[0] == pytest.approx(t41[-1], abs=1e-10)
        assert np.all(t41[1:-1] < t41[0])

    def test_periodic_and_even(self):
        flux = np.linspace(-np.pi, np.pi, 17)
        t41 = ab_interference(0.1, 0.2, 0.05, flux).curves["T41"]
        shifted = ab_interference(0.1, 0.2, 0.05, flux + 2 * np.pi).curves["T41"]
        np.testing.assert_allclose(shifted, t41, atol=1e-10)
        np.testing.assert_allclose(t41, t41[::-1], atol=1e-10)

    @pytest.mark.parametrize("kappa_p", [0.02, 0.1, 0.2])
    def test_two_path_closed_form(self, kappa_p):
        # sites 2 and 3 eliminated: T41 = kappa^2 4 b^2 c / (A^2 - 4 b^2 c)^2, c = cos^2(flux / 2)
        j, kappa = 0.1, 0.2
        b = 2 * j * j / kappa_p
        a = kappa / 2 + 2 * b
        flux = np.linspace(-np.pi, np.pi, 13)
        c = np.cos(flux / 2) ** 2
        expected = kappa ** 2 * 4 * b * b * c / (a * a - 4 * b * b * c) ** 2
        t41 = ab_interference(j, kappa, kappa_p, flux).curves["T41"]
        np.testing.assert_allclose(t41, expected, atol=1e-10)

    def test_path_loss_lowers_peak(self):
        kappa = 0.2
        peaks = [ab_interference(0.1, kappa, f * kappa, [0.0]).curves["T41"][0] for f in (0.1, 0.5, 1.0)]
        assert peaks[0] > peaks[1] > peaks[2]
        np.testing.assert_allclose(peaks, [0.952, 0.790, 0.640], atol=1e-3)

    def test_lattice_ports(self):
        lat = ab_lattice(0.1, 0.2, 0.05, 1.0)
        assert lat.losses == (0.2, 0.05, 0.05, 0.2)

    @pytest.mark.parametrize("kappa,kappa_p,match", [
        (0.0, 0.0, "no ports"),
        (0.0, 0.1, "port loss"),
        (0.2, -0.1, "path loss"),
        (0.2, 0.0, "path loss"),
    ])
    def test_bad_losses(self, kappa, kappa_p, match):
        with pytest.raises(ValidationError, match=match):
            ab_interference(0.1, kappa, kappa_p, [0.0])
