import numpy as np
import pytest

from purecorr import Dims, DensityMatrix, PureState


def random_pure(dims, seed):
    """Haar-random pure state: normalized complex Gaussian vector."""
    rng = np.random.default_rng(seed)
    total = int(np.prod(dims))
    v = rng.normal(size=total) + 1j * rng.normal(size=total)
    return PureState(v / np.linalg.norm(v), Dims(tuple(dims)))


def dm(vec, dims):
    """Projector onto a raw vector, as a DensityMatrix."""
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), Dims(tuple(dims)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
