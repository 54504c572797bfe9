"""Shared curve fixtures for the nevanlab tests."""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from utils.config import load_curve_file  # noqa: E402


@pytest.fixture(scope="session")
def identity_curve():
    return load_curve_file("identity")


@pytest.fixture(scope="session")
def exp_curve():
    return load_curve_file("exp")


@pytest.fixture(scope="session")
def line_curve():
    return load_curve_file("line")


@pytest.fixture(scope="session")
def exp_affine_curve():
    return load_curve_file("exp_affine")


@pytest.fixture(scope="session")
def polynomial_curve():
    return load_curve_file("polynomial")


@pytest.fixture(scope="session")
def interpolation_curve():
    return load_curve_file("interpolation")


@pytest.fixture(scope="session")
def lacunary_curve():
    return load_curve_file("lacunary")
