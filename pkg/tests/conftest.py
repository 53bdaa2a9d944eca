"""
Shared fixtures for the prepotential tests.
"""

import pytest

from prepotential.config.model_config import DEFAULT_CASES
from prepotential.core.models import ModelKind, ModelParams


@pytest.fixture
def coulomb():
    return ModelKind.COULOMB, ModelParams(A=1.0, B=1.0)


@pytest.fixture
def eckart():
    return ModelKind.ECKART, ModelParams(A=2.0, B=16.0)


@pytest.fixture
def rm2():
    return ModelKind.ROSEN_MORSE_II, ModelParams(A=5.0, B=3.0)


@pytest.fixture
def rm1():
    return ModelKind.ROSEN_MORSE_I, ModelParams(A=1.5, B=2.0)


@pytest.fixture(params=list(DEFAULT_CASES.values()), ids=list(DEFAULT_CASES.keys()))
def case(request):
    """Every preset of the verification matrix."""
    return request.param
