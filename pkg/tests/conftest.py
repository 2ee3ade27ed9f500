import pytest

from chatelet.forms import SurfaceSpec

# a = -1, F = (u^2 + 2v^2)(u^2 + 3v^2)
Q1Q2 = SurfaceSpec.from_coefficients(-1, [[1, 0, 2], [1, 0, 3]])
# a = -1, F = u v (u - 3v)(u + 3v); 3 is inert and divides three resultants
SPLIT_QUARTIC = SurfaceSpec.from_coefficients(-1, [[1, 0], [0, 1], [1, -3], [1, 3]])


@pytest.fixture
def q1q2():
    return Q1Q2


@pytest.fixture
def split_quartic():
    return SPLIT_QUARTIC
