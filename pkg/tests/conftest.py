import pytest

from dimreg import idr


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # trigger the jit compile once so timed tests measure the algorithm
    idr.fit([0.0, 1.0], [0.0, 1.0])
