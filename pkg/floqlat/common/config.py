#!/usr/bin/env python3
"""
config.py

Typed loader for the floqlat application configuration YAML.

What's here
-----------
- LoggingConfig: rotates files via LogHelper
- SimulationConfig: numerical knobs shared by every solver
    * threads: sweep worker cap (FLOQLAT_THREADS overrides the YAML value)
    * step-factor: RK4 steps per unit of the fastest frequency scale
    * output-digits: significant digits written to CSV/JSON
    * boson-dim / quadrature-points / n-max: defaults for builders

Usage:
    cfg = Config.load_from_file("config.yml")
    cfg.logging.apply()

    workers = cfg.simulation.threads
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Mapping

import yaml

from floqlat.utils.log_helper import LogHelper

PACKAGED_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config.yml"
DEFAULT_CONFIG_PATH = os.getenv("FLOQLAT_CONFIG_PATH", str(PACKAGED_CONFIG_PATH))
THREADS_ENV = "FLOQLAT_THREADS"


# -------------------- helpers --------------------

def _bool(x: Any) -> bool:
    if isinstance(x, bool):
        return x
    if isinstance(x, str):
        return x.strip().lower() in {"1", "true", "yes", "y", "on"}
    return bool(x)


def _int(raw: Mapping[str, Any], key: str, default: int, minimum: int) -> int:
    value = raw.get(key, default)
    try:
        value = int(value)
    except (TypeError, ValueError) as e:
        raise ValueError(f"{key} must be an integer, got {value!r}") from e
    if value < minimum:
        raise ValueError(f"{key} must be >= {minimum}, got {value}")
    return value


def _threads(raw: Mapping[str, Any]) -> int:
    env = os.getenv(THREADS_ENV)
    if env is not None and env.strip():
        return _int({THREADS_ENV: env}, THREADS_ENV, 1, 1)
    return _int(raw, "threads", os.cpu_count() or 1, 1)


# -------------------- logging --------------------

@dataclass
class LoggingConfig:
    log_directory: Path
    log_file: str
    log_level: str = "INFO"
    log_retain: int = 5
    log_size: int = 5_000_000
    logger: str = "floqlat"
    console: bool = True

    def apply(self) -> None:
        """Set up rotating file handlers based on this config."""
        LogHelper.make_logger(
            log_dir=self.log_directory,
            log_file=self.log_file,
            log_level=self.log_level,
            log_retain=self.log_retain,
            log_size=self.log_size,
            logger=self.logger,
            console=self.console,
        )


# -------------------- simulation --------------------

@dataclass
class SimulationConfig:
    threads: int = 1
    step_factor: int = 100           # dt = 1 / (step_factor * fastest frequency in MHz)
    output_digits: int = 12
    boson_dim: int = 3
    quadrature_points: int = 4096
    n_max: int = 8


# -------------------- root config --------------------

@dataclass
class Config:
    logging: LoggingConfig
    simulation: SimulationConfig

    # ----------- loader -----------
    @classmethod
    def load_from_file(cls, path: str | Path = DEFAULT_CONFIG_PATH) -> "Config":
        data = yaml.safe_load(Path(path).read_text())
        if not isinstance(data, dict):
            raise ValueError("Top-level YAML must be a mapping")

        # logging
        log_raw = data.get("logging") or {}
        logging_cfg = LoggingConfig(
            log_directory=Path(log_raw.get("log-directory") or "logs"),
            log_file=log_raw.get("log-file") or "floqlat.log",
            log_level=(log_raw.get("log-level") or "INFO").upper(),
            log_retain=int(log_raw.get("log-retain") or 5),
            log_size=int(log_raw.get("log-size") or 5_000_000),
            logger=log_raw.get("logger") or "floqlat",
            console=_bool(log_raw.get("console", True)),
        )

        # simulation
        sim_raw = data.get("simulation") or {}
        sim_cfg = SimulationConfig(
            threads=_threads(sim_raw),
            step_factor=_int(sim_raw, "step-factor", 100, 50),
            output_digits=_int(sim_raw, "output-digits", 12, 1),
            boson_dim=_int(sim_raw, "boson-dim", 3, 2),
            quadrature_points=_int(sim_raw, "quadrature-points", 4096, 64),
            n_max=_int(sim_raw, "n-max", 8, 1),
        )

        return cls(logging=logging_cfg, simulation=sim_cfg)


# -------------------- module-level helpers --------------------

@lru_cache(maxsize=1)
def get_cfg(path: str | Path = DEFAULT_CONFIG_PATH) -> Config:
    """Load once, reuse everywhere."""
    return Config.load_from_file(path)


def init_cfg(path: str | Path) -> Config:
    """Call this once at startup if you want a non-default path or to reload."""
    get_cfg.cache_clear()
    return get_cfg(path)
