"""Shared fixtures for all tests.

Points the application config at a throwaway YAML BEFORE any floqlat module
reads FLOQLAT_CONFIG_PATH, so test runs never write logs into the repo.
"""
import math
import os
import tempfile
from pathlib import Path

_TMP = Path(tempfile.mkdtemp(prefix="floqlat-tests-"))
_CONFIG = _TMP / "config.yml"
_CONFIG.write_text(f"""
logging:
  log-directory: {_TMP / 'logs'}
  log-file: floqlat-test.log
  log-level: DEBUG
  log-retain: 1
  log-size: 100000
  logger: floqlat
  console: false

simulation:
  threads: 2
  step-factor: 100
  output-digits: 12
  boson-dim: 3
  quadrature-points: 4096
  n-max: 8
""")
os.environ["FLOQLAT_CONFIG_PATH"] = str(_CONFIG)
os.environ.pop("FLOQLAT_THREADS", None)

import numpy as np
import pytest

from floqlat.dynamics.three_site import PQubitSpec, ThreeSiteFullSpec
from floqlat.dynamics.two_site import TwoSiteFullSpec


@pytest.fixture
def rng():
    """Seeded generator so property tests do not depend on pytest-randomly's order."""
    return np.random.default_rng(20240611)


@pytest.fixture
def app_config_path():
    return _CONFIG


@pytest.fixture(scope="session")
def fig3_spec():
    """Two-site parameters: g_p = 60, delta_p = 600, lambda = 0.5, omega_d = 15, g12 = 1 (MHz)."""
    return TwoSiteFullSpec(g12=1.0, g_p=60.0, delta_p=600.0, omega_d=15.0, lam=0.5)


@pytest.fixture(scope="session")
def fig5_qubit():
    return PQubitSpec(g_p=60.0, delta_p=600.0, lam=0.5)


@pytest.fixture(scope="session")
def fig5_spec(fig5_qubit):
    """Three-site loop: g12 = 0.042, g13 = g23 = 1.1, omega_d = -20 MHz, flux pi/2."""
    spec = ThreeSiteFullSpec(g12=0.042, g13=1.1, g23=1.1, omega_d=-20.0, qubits=(fig5_qubit, fig5_qubit))
    return spec.with_flux(math.pi / 2)
