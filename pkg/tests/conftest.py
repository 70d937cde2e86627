import numpy as np
import pytest

from utils.state_core import DensityMatrix, projector


@pytest.fixture
def bell():
    """(|00> + |11>)/sqrt(2)"""
    psi = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)
    return DensityMatrix((2, 2), projector(psi))


@pytest.fixture
def ket0():
    return DensityMatrix((2,), np.diag([1.0, 0.0]))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
