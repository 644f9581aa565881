import numpy as np
import pytest

from toffopt.matlin import random_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def haar(dim, rng):
    return random_unitary(dim, rng)


def random_diag(rng):
    return np.diag(np.exp(1j * rng.uniform(-np.pi, np.pi, 2)))


def random_unit_phase(rng):
    return np.diag([1.0, np.exp(1j * rng.uniform(-np.pi, np.pi))])


def random_upper_phase(rng):
    return np.diag([np.exp(1j * rng.uniform(-np.pi, np.pi)), 1.0])


def random_antidiag(rng):
    a, b = np.exp(1j * rng.uniform(-np.pi, np.pi, 2))
    return np.array([[0, a], [b, 0]])
