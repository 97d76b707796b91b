"""
Shared fixtures for the BSA lab test suite
"""

import numpy as np
import pytest

from core.bell_utils import BDState, to_density_matrix
from core.sampling_utils import make_rng

WORKED_P = (0.1, 0.1, 0.1, 0.7)
ASYMMETRIC_P = (0.05, 0.1, 0.15, 0.7)


@pytest.fixture
def rng():
    return make_rng(12345)


@pytest.fixture
def worked_state():
    """p = (0.1, 0.1, 0.1, 0.7): λ = 0.6, separable part at the face centroid"""
    return BDState.from_p(WORKED_P)


@pytest.fixture
def worked_rho(worked_state):
    return to_density_matrix(worked_state)


@pytest.fixture
def asymmetric_state():
    """p = (0.05, 0.1, 0.15, 0.7): λ = 0.6, t′ = (−1/3, −1/6, −1/2)"""
    return BDState.from_p(ASYMMETRIC_P)


@pytest.fixture
def maximally_mixed():
    return np.eye(4, dtype=complex) / 4.0
