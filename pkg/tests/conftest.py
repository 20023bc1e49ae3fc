import pytest

from polydiam._accel import NUMBA_AVAILABLE

BACKENDS = ["numpy", "numba"] if NUMBA_AVAILABLE else ["numpy"]


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
