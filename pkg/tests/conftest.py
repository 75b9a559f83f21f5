import pytest

from polarscope.polarspace import polar_space
from polarscope.pseudopolar import section_set


@pytest.fixture(scope="session")
def q62():
    return polar_space("parabolic", 3, 2, 1)


@pytest.fixture(scope="session")
def q62_section(q62):
    # x0 = 0 cuts a hyperbolic Q+(5,2) out of x0^2 + x1x2 + x3x4 + x5x6
    return section_set(q62, [1, 0, 0, 0, 0, 0, 0])
