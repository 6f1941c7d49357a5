import math
import numpy as np
import pytest
from physics.channels import singlet
from physics.network import scenario3
from physics.quantum import AxisTriad


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def pauli_triad():
    return AxisTriad.pauli()


@pytest.fixture
def singlet_scenario():
    return scenario3(singlet(), singlet(), math.pi / 2)
