import numpy as np
import pytest

from dvbtsim import _kernels_py

try:
    from dvbtsim import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

KERNELS = [_kernels_py] + ([_kernels_c] if _kernels_c is not None else [])


@pytest.fixture(params=KERNELS, ids=lambda k: k.BACKEND)
def kernels(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
