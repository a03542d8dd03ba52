"""
Tight-binding lattices with Peierls phases.

A hopping (i, j, J, phi) stands for J exp(i phi) b_i^dag b_j + h.c., i.e. phi is the
phase picked up hopping j -> i. Loop fluxes are sums of these directed phases.
"""
from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from floqlat.floquet.harmonics import wrap_phase
from floqlat.utils.floqlat_exception import ValidationError

logger = logging.getLogger(__name__)

TRS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Hopping:
    i: int
    j: int
    amplitude: float
    phase: float = 0.0

    @classmethod
    def from_complex(cls, i: int, j: int, value: complex) -> "Hopping":
        """Coefficient of b_i^dag b_j as (|value|, arg value); negative reals carry a pi phase."""
        value = complex(value)
        if value == 0:
            return cls(i, j, 0.0, 0.0)
        return cls(i, j, abs(value), float(wrap_phase(np.angle(value))))

    @property
    def value(self) -> complex:
        return self.amplitude * np.exp(1j * self.phase)


@dataclass(frozen=True)
class GaugeLattice:
    n_sites: int
    hoppings: tuple[Hopping, ...] = ()
    onsite_detunings: tuple[float, ...] = field(default=())
    losses: tuple[float, ...] = field(default=())

    def __post_init__(self):
        n = int(self.n_sites)
        if n < 1:
            raise ValidationError(f"n_sites must be >= 1, got {self.n_sites}")
        hops = tuple(h if isinstance(h, Hopping) else Hopping(*h) for h in self.hoppings)
        seen = set()
        for h in hops:
            if h.i == h.j:
                raise ValidationError(f"hopping ({h.i}, {h.j}) is a self-loop; use onsite_detunings")
            if not (0 <= h.i < n and 0 <= h.j < n):
                raise ValidationError(f"hopping ({h.i}, {h.j}) outside 0..{n - 1}")
            if h.amplitude < 0:
                raise ValidationError(f"hopping ({h.i}, {h.j}) has negative amplitude {h.amplitude}")
            key = frozenset((h.i, h.j))
            if key in seen:
                raise ValidationError(f"duplicate hopping between {h.i} and {h.j}")
            seen.add(key)
        detunings = tuple(float(x) for x in self.onsite_detunings) or (0.0,) * n
        losses = tuple(float(x) for x in self.losses) or (0.0,) * n
        if len(detunings) != n:
            raise ValidationError(f"onsite_detunings has {len(detunings)} entries for {n} sites")
        if len(losses) != n:
            raise ValidationError(f"losses has {len(losses)} entries for {n} sites")
        if any(k < 0 for k in losses):
            raise ValidationError("losses must be >= 0")
        object.__setattr__(self, "n_sites", n)
        object.__setattr__(self, "hoppings", hops)
        object.__setattr__(self, "onsite_detunings", detunings)
        object.__setattr__(self, "losses", losses)

    # ---------- access ----------

    def edge_phase(self, i: int, j: int) -> float:
        """Directed phase for b_i^dag b_j."""
        for h in self.hoppings:
            if (h.i, h.j) == (i, j):
                return h.phase
            if (h.i, h.j) == (j, i):
                return -h.phase
        raise ValidationError(f"no hopping between sites {i} and {j}")

    def neighbors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {s: [] for s in range(self.n_sites)}
        for h in self.hoppings:
            adj[h.i].append(h.j)
            adj[h.j].append(h.i)
        return adj

    def hopping_matrix(self) -> np.ndarray:
        """Single-particle matrix in MHz: hoppings plus onsite detunings on the diagonal."""
        m = np.diag(np.array(self.onsite_detunings, dtype=complex))
        for h in self.hoppings:
            m[h.i, h.j] += h.value
            m[h.j, h.i] += np.conj(h.value)
        return m

    def with_losses(self, losses: Sequence[float]) -> "GaugeLattice":
        return replace(self, losses=tuple(losses))

    def with_detunings(self, detunings: Sequence[float]) -> "GaugeLattice":
        return replace(self, onsite_detunings=tuple(detunings))

    # ---------- serialization ----------

    def to_dict(self) -> dict[str, Any]:
        return {
            "sites": self.n_sites,
            "edges": [{"i": h.i, "j": h.j, "J_MHz": h.amplitude, "phi_rad": h.phase} for h in self.hoppings],
            "detunings_MHz": list(self.onsite_detunings),
            "losses_MHz": list(self.losses),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GaugeLattice":
        unknown = set(data) - {"sites", "edges", "detunings_MHz", "losses_MHz"}
        if unknown:
            raise ValidationError(f"unknown lattice keys: {', '.join(sorted(unknown))}")
        try:
            hops = tuple(Hopping(int(e["i"]), int(e["j"]), float(e["J_MHz"]), float(e.get("phi_rad", 0.0)))
                         for e in data.get("edges", []))
            return cls(n_sites=int(data["sites"]), hoppings=hops,
                       onsite_detunings=tuple(data.get("detunings_MHz") or ()),
                       losses=tuple(data.get("losses_MHz") or ()))
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed lattice description: {e}") from e

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "GaugeLattice":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FluxReport:
    cycle: tuple[int, ...]
    flux: float

    @property
    def trs(self) -> bool:
        return _is_multiple_of_pi(self.flux)


def _is_multiple_of_pi(x: float, tol: float = TRS_TOLERANCE) -> bool:
    r = float(np.mod(x, np.pi))
    return bool(min(r, np.pi - r) < tol)


def _closed(cycle: Iterable[int]) -> tuple[int, ...]:
    cycle = tuple(int(c) for c in cycle)
    if len(cycle) > 1 and cycle[0] == cycle[-1]:
        cycle = cycle[:-1]
    if len(cycle) < 2:
        raise ValidationError("a cycle needs at least two sites")
    return cycle


def _raw_flux(lattice: GaugeLattice, cycle: tuple[int, ...]) -> float:
    return sum(lattice.edge_phase(a, b) for a, b in zip(cycle, cycle[1:] + cycle[:1]))


def loop_flux(lattice: GaugeLattice, cycle: Sequence[int]) -> FluxReport:
    """Synthetic flux through a directed closed walk, wrapped to (-pi, pi]."""
    cycle = _closed(cycle)
    return FluxReport(cycle=cycle, flux=float(wrap_phase(_raw_flux(lattice, cycle))))


def gauge_transform(lattice: GaugeLattice, site_phases: Sequence[float]) -> GaugeLattice:
    """b_i -> exp(i theta_i) b_i: phi_ij -> phi_ij + theta_i - theta_j."""
    theta = np.asarray(site_phases, dtype=float)
    if theta.shape != (lattice.n_sites,):
        raise ValidationError(f"expected {lattice.n_sites} site phases, got {theta.size}")
    hops = tuple(replace(h, phase=float(wrap_phase(h.phase + theta[h.i] - theta[h.j]))) for h in lattice.hoppings)
    return replace(lattice, hoppings=hops)


def solve_gauge(lattice: GaugeLattice, targets: Mapping[tuple[int, int], float]) -> np.ndarray:
    """
    Site phases theta that move the listed directed edges to the requested phases.

    Solves theta_i - theta_j = target_ij - phi_ij in the least-squares sense; the
    targets are reachable exactly only if they preserve every enclosed flux.
    """
    if not targets:
        return np.zeros(lattice.n_sites)
    a = np.zeros((len(targets), lattice.n_sites))
    b = np.zeros(len(targets))
    for row, ((i, j), phase) in enumerate(targets.items()):
        a[row, i] += 1.0
        a[row, j] -= 1.0
        b[row] = phase - lattice.edge_phase(i, j)
    theta, *_ = np.linalg.lstsq(a, b, rcond=None)
    return theta


def uniform_gauge(lattice: GaugeLattice, cycle: Sequence[int]) -> tuple[GaugeLattice, np.ndarray]:
    """Spread the cycle flux evenly: every directed cycle edge carries flux / len(cycle)."""
    cycle = _closed(cycle)
    raw = _raw_flux(lattice, cycle)
    share = float(wrap_phase(raw)) / len(cycle)
    edges = list(zip(cycle, cycle[1:] + cycle[:1]))
    targets = {e: share for e in edges}
    # the 2 pi winding left over by wrapping goes on the closing edge so the system stays consistent
    targets[edges[-1]] += raw - float(wrap_phase(raw))
    theta = solve_gauge(lattice, targets)
    return gauge_transform(lattice, theta), theta


def _spanning_forest(lattice: GaugeLattice) -> tuple[dict[int, int | None], dict[int, int]]:
    adj = lattice.neighbors()
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    for root in range(lattice.n_sites):
        if root in parent:
            continue
        parent[root], depth[root] = None, 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in sorted(adj[u]):
                if v not in parent:
                    parent[v], depth[v] = u, depth[u] + 1
                    queue.append(v)
    return parent, depth


def cycle_basis(lattice: GaugeLattice) -> list[tuple[int, ...]]:
    """Fundamental cycles of a BFS spanning forest, one per non-tree edge."""
    parent, depth = _spanning_forest(lattice)
    tree = {frozenset((v, p)) for v, p in parent.items() if p is not None}
    cycles = []
    for h in lattice.hoppings:
        if frozenset((h.i, h.j)) in tree:
            continue
        # walk both ends up to their common ancestor
        up_i, up_j = [h.i], [h.j]
        a, b = h.i, h.j
        while a != b:
            if depth[a] >= depth[b]:
                a = parent[a]
                up_i.append(a)
            else:
                b = parent[b]
                up_j.append(b)
        # j -> i closes the loop: i ... lca ... j
        cycles.append(tuple(up_i + up_j[-2::-1]))
    return cycles


def trs_invariant(lattice: GaugeLattice) -> list[bool]:
    """Per independent cycle: True iff its flux is a multiple of pi."""
    return [loop_flux(lattice, c).trs for c in cycle_basis(lattice)]


def is_time_reversal_symmetric(lattice: GaugeLattice) -> bool:
    return all(trs_invariant(lattice))


def real_gauge(lattice: GaugeLattice) -> np.ndarray:
    """Site phases that make every hopping real; requires every cycle flux to be 0 or pi."""
    if not is_time_reversal_symmetric(lattice):
        raise ValidationError("lattice breaks time-reversal symmetry; no real gauge exists")
    parent, depth = _spanning_forest(lattice)
    theta = np.zeros(lattice.n_sites)
    for v in sorted(parent, key=depth.__getitem__):
        p = parent[v]
        if p is not None:
            theta[v] = theta[p] + lattice.edge_phase(p, v)
    return theta
