"""One function per subcommand: build the solver inputs, run them, collect tables and a summary."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from floqlat.cli.experiment import ExperimentConfig
from floqlat.common.config import SimulationConfig
from floqlat.common.sweep import SweepResult, format_number
from floqlat.dynamics.three_site import PQubitSpec, ThreeSiteFullSpec, chiral_circulation, effective_lattice
from floqlat.dynamics.two_site import TwoSiteFullSpec, effective_constants, rabi_compare
from floqlat.floquet.harmonics import (DriveSpec, chi_harmonics, chi_harmonics_closed_form, geometric_ratio,
                                       harmonics_sweep)
from floqlat.lattice.gauge_lattice import loop_flux, uniform_gauge
from floqlat.lattice.ladder import (LadderSpec, bloch_bands_closed_form, ladder_bloch_spectrum, open_spectrum,
                                    plaquette_cycles, ladder_lattice)
from floqlat.transport.floquet_transport import floquet_transmission_sweep
from floqlat.transport.scattering import (ab_interference, ab_lattice, circulator_fidelity, scattering_matrix,
                                          transmission_sweep)

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    table: SweepResult
    extra_tables: dict[str, SweepResult] = field(default_factory=dict)
    summary: list[tuple[str, str]] = field(default_factory=list)

    def add(self, key: str, value, digits: int = 6) -> None:
        if isinstance(value, (float, np.floating)):
            value = format_number(value, digits)
        self.summary.append((key, str(value)))


def _fourier(cfg: ExperimentConfig, sim: SimulationConfig) -> CommandResult:
    if cfg["lambda_steps"] > 0:
        lambdas = np.linspace(cfg["lambda_min"], cfg["lambda_max"], cfg["lambda_steps"])
        columns = harmonics_sweep(lambdas, n_max=cfg["n_max"], phi=cfg["phi"], points=sim.quadrature_points)
        axis = columns.pop("lambda")
        result = CommandResult(SweepResult("lambda", axis, columns, meta={"phi_rad": cfg["phi"]}))
        result.add("lambda range", f"{format_number(axis[0])} .. {format_number(axis[-1])} ({axis.size} points)")
        return result

    drive = DriveSpec(lam=cfg["lam"], phi=cfg["phi"])
    if cfg["method"] == "closed":
        h = chi_harmonics_closed_form(drive, n_max=cfg["n_max"])
    else:
        h = chi_harmonics(drive, n_max=cfg["n_max"], points=sim.quadrature_points)
    n = np.arange(h.n_max + 1)
    result = CommandResult(SweepResult("n", n, {"xi_n": h.xi, "phi_n_rad": h.phases},
                                       meta={"lambda": h.lam, "phi_rad": h.phi, "method": cfg["method"]}))
    result.add("lambda", h.lam)
    result.add("c0", h.c0)
    result.add("r(lambda)", geometric_ratio(h.lam))
    result.add("xi1", h.xi[1])
    if h.n_max >= 2 and h.xi[1] > 0:
        result.add("xi2/xi1", h.xi[2] / h.xi[1])
    return result


def _two_site_spec(cfg: ExperimentConfig, sim: SimulationConfig) -> TwoSiteFullSpec:
    return TwoSiteFullSpec(g12=cfg["g12"], g_p=cfg["g_p"], delta_p=cfg["delta_p"], omega_d=cfg["omega_d"],
                           phi=cfg["phi"], omega_p=cfg.get("omega_p"), lam=cfg.get("lam"),
                           resonance_sign=cfg["resonance_sign"], boson_dim=cfg.get("boson_dim", sim.boson_dim),
                           initial=cfg["initial"])


def _rabi(cfg: ExperimentConfig, sim: SimulationConfig) -> CommandResult:
    spec = _two_site_spec(cfg, sim)
    cmp = rabi_compare(spec, cfg["t_max"], step_factor=sim.step_factor, hopping=cfg["hopping"])
    c = cmp.constants
    table = SweepResult("t_us", cmp.full.times, {
        "P1_full": cmp.full["P1"], "P2_full": cmp.full["P2"], "Pe_full": cmp.full["Pe"],
        "P1_eff": cmp.effective["P1"], "P2_eff": cmp.effective["P2"],
    }, meta={"J12_MHz": c.J12, "J12_dressed_MHz": c.J12_dressed, "K1": c.K1, "hopping": cfg["hopping"]})
    result = CommandResult(table)
    result.add("lambda", c.lam)
    result.add("chi0_MHz", c.chi0)
    result.add("c0", c.c0)
    result.add("K1", c.K1)
    result.add("J12_MHz", c.J12)
    result.add("J12_dressed_MHz", c.J12_dressed)
    if c.J12 > 0:
        result.add("swap_time_expected_us", 1.0 / (4.0 * c.J12))
    result.add("swap_time_full_us", cmp.swap_time_full if cmp.swap_time_full is not None else "none")
    result.add("swap_time_effective_us", cmp.swap_time_effective if cmp.swap_time_effective is not None else "none")
    result.add("max_P2_full", float(np.max(cmp.full["P2"])))
    result.add("max_Pe", cmp.max_excited)
    result.add("max_deviation", cmp.max_deviation)
    if cfg.get("kerr") is not None:
        kc = effective_constants(spec, kerr=cfg["kerr"])
        result.add("chi0_kerr_MHz", kc.chi0)
        result.add("K1_kerr", kc.K1)
        result.add("J12_kerr_MHz", kc.J12)
    return result


def _three_site_spec(cfg: ExperimentConfig, sim: SimulationConfig, **extra) -> ThreeSiteFullSpec:
    qubit = PQubitSpec(g_p=cfg["g_p"], delta_p=cfg["delta_p"], lam=cfg.get("lam"), omega_p=cfg.get("omega_p"))
    spec = ThreeSiteFullSpec(g12=cfg["g12"], g13=cfg["g13"], g23=cfg["g23"], omega_d=cfg["omega_d"],
                             qubits=(qubit, qubit), boson_dim=cfg.get("boson_dim", sim.boson_dim), **extra)
    return spec.with_flux(cfg["flux"])


def _report_lattice(result: CommandResult, spec: ThreeSiteFullSpec) -> None:
    lattice = effective_lattice(spec)
    for h, name in zip(lattice.hoppings, ("J12_MHz", "J23_MHz", "J31_MHz")):
        result.add(name, h.amplitude)
    flux = loop_flux(lattice, [0, 1, 2]).flux
    result.add("flux_rad", flux)
    uniform, _ = uniform_gauge(lattice, [0, 1, 2])
    result.add("phi_c_rad", uniform.edge_phase(0, 1))


def _chiral(cfg: ExperimentConfig, sim: SimulationConfig) -> CommandResult:
    spec = _three_site_spec(cfg, sim, mode=cfg["mode"], modulation=cfg["modulation"])
    report, traj = chiral_circulation(spec, cfg["flux"], cfg["t_max"], step_factor=sim.step_factor)
    result = CommandResult(SweepResult("t_us", traj.times, dict(traj.observables),
                                       meta={"mode": cfg["mode"], "modulation": cfg["modulation"],
                                             "flux_rad": cfg["flux"]}))
    _report_lattice(result, spec)
    for site in (2, 3):
        t = report.peak_times[site]
        result.add(f"first_peak_P{site}_us", t if t is not None else "none")
    result.add("circulation_period_us", report.period)
    result.add("order", "->".join(str(s) for s in report.order))
    result.add("direction", report.direction)
    return result


def _circulator(cfg: ExperimentConfig, sim: SimulationConfig) -> CommandResult:
    spec = _three_site_spec(cfg, sim, kappa=cfg["kappa"])
    lattice = effective_lattice(spec)
    port = cfg["input_port"] - 1
    deltas = np.linspace(cfg["delta_min"], cfg["delta_max"], cfg["delta_steps"])
    result = CommandResult(transmission_sweep(lattice, deltas, port, threads=sim.threads))
    _report_lattice(result, spec)
    result.add("kappa/2_MHz", 0.5 * cfg["kappa"])
    at_zero = scattering_matrix(lattice, 0.0)
    result.add("fidelity_ccw", circulator_fidelity(at_zero, "ccw"))
    result.add("fidelity_cw", circulator_fidelity(at_zero, "cw"))

    if cfg["floquet_steps"] > 0:
        grid = np.linspace(cfg["delta_min"], cfg["delta_max"], cfg["floquet_steps"])
        floquet = floquet_transmission_sweep(spec, grid, port, step_factor=sim.step_factor, threads=sim.threads)
        result.extra_tables["floquet"] = floquet
        analytic = transmission_sweep(lattice, grid, port, threads=sim.threads)
        gap = max(float(np.max(np.abs(floquet.curves[k] - analytic.curves[k]))) for k in floquet.curves)
        result.add("max_floquet_vs_analytic", gap)
    return result


def _ab(cfg: ExperimentConfig, sim: SimulationConfig) -> CommandResult:
    fluxes = np.linspace(cfg["flux_min"], cfg["flux_max"], cfg["flux_steps"])
    losses = cfg.get("kappa_p_list") or [cfg["kappa_p"]]
    curves = {}
    for kp in losses:
        sweep = ab_interference(cfg["J"], cfg["kappa"], kp, fluxes, delta_d=cfg["delta_d"], threads=sim.threads)
        name = "T41" if len(losses) == 1 else f"T41_kp{format_number(kp, 6)}"
        curves[name] = sweep.curves["T41"]
    result = CommandResult(SweepResult("flux_rad", fluxes, curves,
                                       meta={"J_MHz": cfg["J"], "kappa_MHz": cfg["kappa"], "kappa_p_MHz": losses}))
    for kp, (name, values) in zip(losses, curves.items()):
        dark = scattering_matrix(ab_lattice(cfg["J"], cfg["kappa"], kp, math.pi), cfg["delta_d"], ports=(0, 3))
        result.add(f"{name}_at_pi", float(dark.transmissions[1, 0]), digits=3)
        result.add(f"{name}_max", float(np.max(values)))
    return result


def _ladder(cfg: ExperimentConfig, sim: SimulationConfig) -> CommandResult:
    spec = LadderSpec(cfg["n_rungs"], cfg["t_prime"], cfg["J_rung"], cfg["phi"], cfg["boundary"])
    plaquette = plaquette_cycles(spec)[0]
    if spec.boundary.value == "open":
        energies = open_spectrum(spec)
        result = CommandResult(SweepResult("index", np.arange(energies.size), {"E_MHz": energies}))
    else:
        k = np.linspace(-math.pi, math.pi, cfg["k_points"])
        lower, upper = ladder_bloch_spectrum(spec.t_prime, spec.J_rung, spec.phi, k)
        result = CommandResult(SweepResult("k_rad", k, {"E_minus_MHz": lower, "E_plus_MHz": upper}))
        closed = bloch_bands_closed_form(spec.t_prime, spec.J_rung, spec.phi, k)
        result.add("closed_form_error", float(max(np.max(np.abs(lower - closed[0])),
                                                  np.max(np.abs(upper - closed[1])))), digits=3)
    result.add("plaquette_flux_rad", loop_flux(ladder_lattice(spec), plaquette).flux)
    return result


HANDLERS: dict[str, Callable[[ExperimentConfig, SimulationConfig], CommandResult]] = {
    "fourier": _fourier,
    "rabi": _rabi,
    "chiral": _chiral,
    "circulator": _circulator,
    "ab": _ab,
    "ladder": _ladder,
}


def execute(cfg: ExperimentConfig, sim: SimulationConfig) -> CommandResult:
    logger.info("running %s with %s", cfg.command, cfg.parameters)
    return HANDLERS[cfg.command](cfg, sim)
