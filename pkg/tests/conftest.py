import numpy as np
import pytest

from causal_kernel.algebra import FactorSpec, FreeAlgebra

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


@pytest.fixture
def qubit_pair_algebra():
    return FreeAlgebra([FactorSpec(1, 2), FactorSpec(2, 2)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
