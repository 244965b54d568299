"""Pytest configuration and fixtures for vpquad tests."""

import math
import sys
from pathlib import Path

import pytest

# Add project root to path for imports
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from vpquad.core.ndi_controller import ControllerTuning, Gains
from vpquad.core.rigid_body import VehicleParams, hover_trim, make_state
from vpquad.core.rotor_aero import RotorModel


@pytest.fixture
def rotor():
    """Rotor with the default blade geometry."""
    return RotorModel()


@pytest.fixture
def vehicle():
    """Vehicle with the default mass properties."""
    return VehicleParams()


@pytest.fixture
def gains():
    return Gains()


@pytest.fixture
def tuning():
    return ControllerTuning()


@pytest.fixture
def trim(rotor, vehicle):
    """Hover trim operating point."""
    return hover_trim(rotor, vehicle)


@pytest.fixture
def level_state():
    return make_state()


@pytest.fixture
def inverted_state():
    return make_state(phi=math.pi)


@pytest.fixture
def temp_dir(tmp_path):
    """Temporary directory for file operations."""
    return tmp_path
