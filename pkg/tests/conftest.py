import numpy as np
import pytest

from qdiff import SpinBasis, build_eigenbasis

_EIG_CACHE = {}


def eigenbasis(N):
    if N not in _EIG_CACHE:
        _EIG_CACHE[N] = build_eigenbasis(N)
    return _EIG_CACHE[N]


@pytest.fixture(scope="session")
def eig8():
    return eigenbasis(8)


@pytest.fixture(scope="session")
def eig16():
    return eigenbasis(16)


@pytest.fixture(scope="session")
def eig32():
    return eigenbasis(32)


@pytest.fixture(scope="session")
def eig64():
    return eigenbasis(64)


@pytest.fixture(scope="session")
def basis16():
    return SpinBasis(16)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_points(rng, n, zmin=-1.0):
    p = rng.standard_normal((3 * n + 8, 3))
    p /= np.linalg.norm(p, axis=1, keepdims=True)
    p = p[p[:, 2] > zmin]
    return p[:n]
