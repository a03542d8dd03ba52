"""Tests for floqlat.lattice.gauge_lattice: fluxes, gauge freedom and time-reversal classification."""
import numpy as np
import pytest

from floqlat.lattice.gauge_lattice import (GaugeLattice, Hopping, cycle_basis, gauge_transform,
                                           is_time_reversal_symmetric, loop_flux, real_gauge, trs_invariant,
                                           uniform_gauge)
from floqlat.lattice.ladder import LadderSpec, ladder_lattice
from floqlat.lattice.models import three_site_effective
from floqlat.utils.floqlat_exception import ValidationError


def triangle(flux: float, j: float = 0.1) -> GaugeLattice:
    return GaugeLattice(3, (Hopping(0, 1, j), Hopping(1, 2, j, flux / 2), Hopping(2, 0, j, flux / 2)))


class TestConstruction:
    """Validation of hoppings, detunings and losses."""

    def test_defaults(self):
        lat = triangle(0.0)
        assert lat.onsite_detunings == (0.0, 0.0, 0.0)
        assert lat.losses == (0.0, 0.0, 0.0)

    def test_tuples_are_promoted(self):
        lat = GaugeLattice(2, ((0, 1, 0.5, 0.2),))
        assert lat.hoppings[0] == Hopping(0, 1, 0.5, 0.2)

    @pytest.mark.parametrize("hop,match", [
        (Hopping(1, 1, 0.1), "self-loop"),
        (Hopping(0, 3, 0.1), "outside"),
        (Hopping(0, 1, -0.1), "negative amplitude"),
    ])
    def test_bad_hopping(self, hop, match):
        with pytest.raises(ValidationError, match=match):
            GaugeLattice(3, (hop,))

    def test_duplicate_pair(self):
        with pytest.raises(ValidationError, match="duplicate"):
            GaugeLattice(2, (Hopping(0, 1, 0.1), Hopping(1, 0, 0.2)))

    def test_loss_vector(self):
        with pytest.raises(ValidationError, match="losses has"):
            GaugeLattice(3, losses=(0.1, 0.1))
        with pytest.raises(ValidationError, match=">= 0"):
            GaugeLattice(2, losses=(0.1, -0.1))

    def test_from_complex_negative_real(self):
        hop = Hopping.from_complex(0, 1, -0.3)
        assert hop.amplitude == pytest.approx(0.3)
        assert hop.phase == pytest.approx(np.pi)

    def test_hopping_matrix_is_hermitian(self):
        lat = triangle(0.9).with_detunings((0.1, -0.2, 0.3))
        h = lat.hopping_matrix()
        np.testing.assert_allclose(h, h.conj().T)
        assert h[1, 2] == pytest.approx(0.1 * np.exp(0.45j))
        np.testing.assert_allclose(np.diag(h).real, [0.1, -0.2, 0.3])

    def test_edge_phase_direction(self):
        lat = triangle(1.0)
        assert lat.edge_phase(1, 2) == pytest.approx(0.5)
        assert lat.edge_phase(2, 1) == pytest.approx(-0.5)
        with pytest.raises(ValidationError, match="no hopping"):
            GaugeLattice(3, (Hopping(0, 1, 0.1),)).edge_phase(0, 2)


class TestLoopFlux:

    def test_three_site_flux(self):
        lat = three_site_effective(0.042, 1.1, 1.1, -20.0, -0.1, -0.1, -np.pi / 4, np.pi / 4)
        assert loop_flux(lat, [0, 1, 2]).flux == pytest.approx(np.pi / 2)

    def test_reversal_negates(self):
        lat = triangle(0.8)
        assert loop_flux(lat, [0, 2, 1]).flux == pytest.approx(-loop_flux(lat, [0, 1, 2]).flux)

    def test_closed_cycle_notation(self):
        lat = triangle(0.8)
        assert loop_flux(lat, [0, 1, 2, 0]).cycle == (0, 1, 2)

    def test_wrapped(self):
        assert loop_flux(triangle(3 * np.pi / 2), [0, 1, 2]).flux == pytest.approx(-np.pi / 2)

    def test_gauge_invariance(self, rng):
        lat = triangle(1.3)
        moved = gauge_transform(lat, rng.uniform(-np.pi, np.pi, size=3))
        assert loop_flux(moved, [0, 1, 2]).flux == pytest.approx(1.3)
        np.testing.assert_allclose(np.linalg.eigvalsh(moved.hopping_matrix()),
                                   np.linalg.eigvalsh(lat.hopping_matrix()), atol=1e-12)

    def test_too_short(self):
        with pytest.raises(ValidationError, match="two sites"):
            loop_flux(triangle(0.0), [0])


class TestUniformGauge:
    """Flux spread evenly over the loop edges."""

    def test_circulator_phase(self):
        lat, theta = uniform_gauge(triangle(np.pi / 2), [0, 1, 2])
        for a, b in [(0, 1), (1, 2), (2, 0)]:
            assert lat.edge_phase(a, b) == pytest.approx(np.pi / 6, abs=1e-12)
        assert theta.shape == (3,)

    def test_negative_amplitudes_keep_flux(self):
        # a pi phase from a negative drive strength must not leak into the per-edge share
        lat = three_site_effective(0.042, 1.1, 1.1, -20.0, -0.1, -0.1, -np.pi / 4, np.pi / 4)
        moved, _ = uniform_gauge(lat, [0, 1, 2])
        assert loop_flux(moved, [0, 1, 2]).flux == pytest.approx(loop_flux(lat, [0, 1, 2]).flux)
        for a, b in [(0, 1), (1, 2), (2, 0)]:
            assert moved.edge_phase(a, b) == pytest.approx(np.pi / 6, abs=1e-9)


class TestTimeReversal:
    """A lattice is TRS iff every independent loop encloses 0 or pi."""

    @pytest.mark.parametrize("flux,expected", [(0.0, True), (np.pi, True), (np.pi / 2, False), (0.3, False)])
    def test_triangle(self, flux, expected):
        lat = triangle(flux)
        assert loop_flux(lat, [0, 1, 2]).trs is expected
        assert is_time_reversal_symmetric(lat) is expected

    def test_tree_is_always_symmetric(self):
        lat = GaugeLattice(3, (Hopping(0, 1, 0.1, 0.7), Hopping(1, 2, 0.1, -1.1)))
        assert cycle_basis(lat) == []
        assert is_time_reversal_symmetric(lat)

    def test_ladder_cycles(self):
        spec = LadderSpec(4, 1.0, 0.5, 0.2, boundary="open")
        lat = ladder_lattice(spec)
        basis = cycle_basis(lat)
        assert len(basis) == 3
        assert trs_invariant(lat) == [False, False, False]
        for c in basis:
            assert abs(loop_flux(lat, c).flux) == pytest.approx(0.4)

    def test_real_gauge(self):
        lat = gauge_transform(triangle(np.pi), [0.3, -1.2, 2.0])
        theta = real_gauge(lat)
        h = gauge_transform(lat, theta).hopping_matrix()
        np.testing.assert_allclose(h.imag, 0.0, atol=1e-12)

    def test_no_real_gauge_with_flux(self):
        with pytest.raises(ValidationError, match="time-reversal"):
            real_gauge(triangle(np.pi / 2))


class TestSerialization:

    def test_json(self):
        lat = triangle(0.7).with_losses((0.2, 0.2, 0.2))
        data = lat.to_dict()
        assert data["sites"] == 3
        assert data["edges"][1] == {"i": 1, "j": 2, "J_MHz": 0.1, "phi_rad": 0.35}
        assert GaugeLattice.from_json(lat.to_json()) == lat

    def test_unknown_key(self):
        with pytest.raises(ValidationError, match="unknown lattice keys"):
            GaugeLattice.from_dict({"sites": 2, "edges": [], "colour": "red"})

    def test_missing_amplitude(self):
        with pytest.raises(ValidationError, match="malformed"):
            GaugeLattice.from_dict({"sites": 2, "edges": [{"i": 0, "j": 1}]})
