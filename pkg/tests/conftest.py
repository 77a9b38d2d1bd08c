import numpy as np
import pytest

from cavity_qutrits.hamiltonians import PhysParams
from cavity_qutrits.hilbert import SpaceSpec


@pytest.fixture
def params():
    """Reference couplings: g/2π = 25 kHz, δ_eg = 10 g, n_max = 4."""
    return PhysParams.from_ratio(25e3, 10.0)


@pytest.fixture
def space():
    return SpaceSpec(fock_dim=5)


@pytest.fixture
def rng():
    return np.random.default_rng(20021015)


def random_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_hermitian(rng, dim, scale=1.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2


def random_density(rng, dim, rank=None):
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)
