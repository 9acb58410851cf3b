import numpy as np
import pytest

from qcorr import kernels


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def available_backends():
    names = ["numpy"]
    try:
        kernels.get_backend("cython")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names
