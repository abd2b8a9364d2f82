"""Shared fixtures for the test suite."""

import dataclasses
import json
import math
import pathlib

import pytest

from qwire import WireParams

DATA_DIR = pathlib.Path(__file__).parent / "data"

#: benchmark parameter sets (k is point-specific and set via with_k)
WIDE_GAP = WireParams(omega_c=1.0, omega_h=2.0, k=0.1, t_c=2.0, t_h=3.0,
                      lambda_sq=1e-3, cutoff=1e3)
NEAR_DEGENERATE = WireParams(omega_c=1.0, omega_h=math.sqrt(1.0 + 2e-6),
                             k=1e-3, t_c=2.0, t_h=3.0, lambda_sq=1e-3,
                             cutoff=1e3)
RESONANT_STRONG = WireParams(omega_c=10.0, omega_h=10.0, k=1e3, t_c=1.0,
                             t_h=2.0, lambda_sq=1e-3, cutoff=1e3)


def with_k(params: WireParams, k: float) -> WireParams:
    return dataclasses.replace(params, k=k)


@pytest.fixture(scope="session")
def fock_reference() -> dict:
    path = DATA_DIR / "fock_reference.json"
    if not path.exists():
        pytest.skip("frozen Fock reference data missing; run "
                    "tests/generate_reference_states.py first")
    return json.loads(path.read_text())
