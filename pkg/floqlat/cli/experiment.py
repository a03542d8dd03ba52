"""
Experiment configuration: per-command parameter tables, figure presets and merging.

Precedence, lowest first: parameter defaults, preset, JSON config file, command-line flags.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

from floqlat.utils.floqlat_exception import ValidationError

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("csv", "json")
REQUIRED = object()


def _float_list(raw: Any) -> list[float]:
    if isinstance(raw, str):
        raw = [x for x in raw.split(",") if x.strip()]
    return [float(x) for x in raw]


@dataclass(frozen=True)
class Param:
    name: str
    kind: Callable[[Any], Any]
    default: Any = None
    help: str = ""
    minimum: float | None = None
    positive: bool = False
    choices: tuple | None = None
    aliases: tuple[str, ...] = ()

    @property
    def required(self) -> bool:
        return self.default is REQUIRED

    @property
    def flag(self) -> str:
        return "--" + self.name.replace("_", "-")

    def convert(self, command: str, raw: Any) -> Any:
        if raw is None:
            return None
        try:
            value = self.kind(raw)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"{command}: {self.name}={raw!r} is not a valid {self.kind.__name__}") from e
        if self.choices is not None and value not in self.choices:
            raise ValidationError(f"{command}: {self.name}={value!r} must be one of {self.choices}")
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            if not math.isfinite(value):
                raise ValidationError(f"{command}: {self.name} must be finite")
            if self.positive and value <= 0:
                raise ValidationError(f"{command}: {self.name}={value} must be > 0")
            if self.minimum is not None and value < self.minimum:
                raise ValidationError(f"{command}: {self.name}={value} must be >= {self.minimum}")
        return value


_QUBIT = [
    Param("g_p", float, REQUIRED, "p-qubit/cavity coupling (MHz)", positive=True),
    Param("delta_p", float, REQUIRED, "p-qubit detuning (MHz)"),
    Param("lam", float, None, "modulation depth lambda = Omega_p / delta_p", minimum=0.0, aliases=("--lambda",)),
    Param("omega_p", float, None, "longitudinal drive amplitude (MHz); used when lambda is absent"),
    Param("omega_d", float, REQUIRED, "drive frequency (MHz)"),
]

_TRIANGLE = [
    Param("g12", float, REQUIRED, "direct cavity 1-2 coupling (MHz)"),
    Param("g13", float, REQUIRED, "coupler-mediated cavity 1-3 coupling (MHz)"),
    Param("g23", float, REQUIRED, "coupler-mediated cavity 2-3 coupling (MHz)"),
    *_QUBIT,
    Param("flux", float, math.pi / 2, "synthetic loop flux (rad)"),
]

COMMANDS: dict[str, list[Param]] = {
    "fourier": [
        Param("lam", float, 0.5, "modulation depth lambda", minimum=0.0, aliases=("--lambda",)),
        Param("phi", float, 0.0, "drive phase (rad)"),
        Param("n_max", int, 8, "highest harmonic", minimum=1, aliases=("--nmax",)),
        Param("method", str, "closed", "closed-form series or numerical quadrature",
              choices=("closed", "quadrature")),
        Param("lambda_min", float, 0.05, "sweep start", minimum=0.0),
        Param("lambda_max", float, 0.95, "sweep end", minimum=0.0),
        Param("lambda_steps", int, 0, "number of lambda values; 0 keeps a single lambda", minimum=0),
    ],
    "rabi": [
        Param("g12", float, REQUIRED, "cavity 1-2 coupling (MHz)"),
        *_QUBIT,
        Param("phi", float, 0.0, "drive phase (rad)"),
        Param("t_max", float, 8.0, "evolution time (us)", positive=True),
        Param("boson_dim", int, None, "Fock truncation per cavity", minimum=2),
        Param("resonance_sign", int, 1, "+1 for delta12 = -omega_d, -1 for delta12 = +omega_d", choices=(1, -1)),
        Param("initial", str, "dressed", "initial single-phonon state", choices=("dressed", "bare")),
        Param("kerr", float, None, "report K1 and J12 for a Kerr mode of this anharmonicity (MHz)"),
        Param("hopping", str, "dressed", "effective hopping: exact dressed modulation or g12 K1 / 2",
              choices=("dressed", "first_harmonic")),
    ],
    "chiral": [
        *_TRIANGLE,
        Param("t_max", float, 12.0, "evolution time (us)", positive=True),
        Param("mode", str, "qubit_eliminated", "keep the p-qubits or use the modulated-cavity model",
              choices=("qubit_eliminated", "with_qubits")),
        Param("modulation", str, "first_harmonic", "cavity modulation in the eliminated model: first harmonic "
              "or every harmonic of the exact dressed shift", choices=("first_harmonic", "dressed")),
        Param("boson_dim", int, None, "Fock truncation per cavity", minimum=2),
    ],
    "circulator": [
        *_TRIANGLE,
        Param("kappa", float, REQUIRED, "port loss of every cavity (MHz)", positive=True),
        Param("delta_min", float, -0.5, "input detuning sweep start (MHz)"),
        Param("delta_max", float, 0.5, "input detuning sweep end (MHz)"),
        Param("delta_steps", int, 101, "analytic sweep points", minimum=1),
        Param("floquet_steps", int, 0, "time-domain sweep points (0 skips the time-domain solver)", minimum=0),
        Param("input_port", int, 1, "input cavity (1-3)", choices=(1, 2, 3)),
    ],
    "ab": [
        Param("J", float, 0.1, "bridged hopping (MHz)", positive=True),
        Param("kappa", float, 0.2, "port loss of cavities 1 and 4 (MHz)", positive=True),
        Param("kappa_p", float, 0.02, "path loss of cavities 2 and 3 (MHz)", positive=True),
        Param("kappa_p_list", _float_list, None, "comma-separated path losses, one curve each"),
        Param("flux_min", float, 0.0, "flux sweep start (rad)"),
        Param("flux_max", float, 2 * math.pi, "flux sweep end (rad)"),
        Param("flux_steps", int, 101, "flux sweep points", minimum=1),
        Param("delta_d", float, 0.0, "input detuning (MHz)"),
    ],
    "ladder": [
        Param("n_rungs", int, 64, "number of rungs", minimum=2),
        Param("t_prime", float, 1.0, "leg hopping (MHz)"),
        Param("J_rung", float, 1.0, "rung hopping (MHz)"),
        Param("phi", float, math.pi / 4, "leg phase per link (rad); plaquette flux is 2 phi"),
        Param("k_points", int, 129, "momentum samples in [-pi, pi] for periodic ladders", minimum=2),
        Param("boundary", str, "periodic", "periodic Bloch bands or open-chain spectrum",
              choices=("periodic", "open")),
    ],
}

FIG5 = {"g12": 0.042, "g13": 1.1, "g23": 1.1, "g_p": 60.0, "delta_p": 600.0, "omega_p": 150.0, "lam": 0.5,
        "omega_d": -20.0, "flux": math.pi / 2}


@dataclass(frozen=True)
class Preset:
    command: str
    parameters: Mapping[str, Any]
    note: str = ""


PRESETS: dict[str, Preset] = {
    "figure2": Preset("fourier", {"phi": 0.0, "n_max": 8, "lambda_min": 0.05, "lambda_max": 0.95,
                                  "lambda_steps": 19}),
    "figure3": Preset("rabi", {"g12": 1.0, "g_p": 60.0, "delta_p": 600.0, "lam": 0.5, "omega_d": 15.0,
                               "phi": 0.0, "t_max": 8.0},
                      "lambda fixed at 0.5 (chi0 = 6 MHz, K1 ~ 0.25); the listed drive amplitude is not used"),
    "figure5": Preset("circulator", {**FIG5, "kappa": 0.2, "delta_min": -0.5, "delta_max": 0.5,
                                     "delta_steps": 101, "floquet_steps": 11},
                      "lambda fixed at 0.5; the listed drive amplitude (Omega_p / delta_p = 0.25) is not used"),
    "figure5-chiral": Preset("chiral", {**FIG5, "t_max": 12.0},
                             "closed-system run; kappa = 0.2 MHz enters only the circulator sweep"),
    "figure7": Preset("ab", {"J": 0.1, "kappa": 0.2, "kappa_p_list": [0.02, 0.1, 0.2], "flux_steps": 201}),
}

COMMAND_PRESETS: dict[str, dict[str, str]] = {
    "fourier": {"figure2": "figure2"},
    "rabi": {"figure3": "figure3"},
    "chiral": {"figure5": "figure5-chiral"},
    "circulator": {"figure5": "figure5"},
    "ab": {"figure7": "figure7"},
    "ladder": {},
}


@dataclass
class ExperimentConfig:
    command: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output: str = "csv"
    out_path: str | None = None
    note: str = ""

    def __getitem__(self, key: str) -> Any:
        return self.parameters[key]

    def get(self, key: str, default: Any = None) -> Any:
        value = self.parameters.get(key)
        return default if value is None else value

    @staticmethod
    def load_file(path: str | Path) -> dict[str, Any]:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"cannot read experiment config {path}: {e}") from e
        if not isinstance(data, dict):
            raise ValidationError("experiment config must be a JSON object")
        unknown = set(data) - {"command", "parameters", "output", "out_path"}
        if unknown:
            raise ValidationError(f"unknown experiment config keys: {', '.join(sorted(unknown))}")
        return data

    @classmethod
    def resolve(cls, command: str, *, preset: str | None = None, file_data: Mapping[str, Any] | None = None,
                flags: Mapping[str, Any] | None = None, output: str | None = None,
                out_path: str | None = None) -> "ExperimentConfig":
        if command not in COMMANDS:
            raise ValidationError(f"unknown command {command!r}")
        table = {p.name: p for p in COMMANDS[command]}
        merged: dict[str, Any] = {name: p.default for name, p in table.items() if not p.required}
        note = ""

        def apply(source: Mapping[str, Any], origin: str) -> None:
            for key, value in source.items():
                if key not in table:
                    raise ValidationError(f"{command}: unknown key {key!r} in {origin}")
                if value is not None:
                    merged[key] = table[key].convert(command, value)

        if preset is not None:
            p = PRESETS[preset]
            apply(p.parameters, f"preset {preset}")
            note = p.note
        file_data = dict(file_data or {})
        if file_data:
            if file_data.get("command", command) != command:
                raise ValidationError(f"config file is for {file_data['command']!r}, not {command!r}")
            apply(file_data.get("parameters") or {}, "config file")
        apply(flags or {}, "flags")

        missing = [name for name, p in table.items() if p.required and merged.get(name) is None]
        if missing:
            raise ValidationError(f"{command}: missing required parameter(s): {', '.join(missing)}")

        output = output or file_data.get("output") or "csv"
        if output not in OUTPUT_FORMATS:
            raise ValidationError(f"output must be one of {OUTPUT_FORMATS}, got {output!r}")
        out_path = out_path or file_data.get("out_path")
        return cls(command=command, parameters=merged, output=output, out_path=out_path, note=note)

    def default_out_path(self) -> str:
        return self.out_path or f"floqlat-{self.command}.{self.output}"
