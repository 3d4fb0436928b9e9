import numpy as np
import pytest

from fibeam import ArrayConfig, ConePattern, SincPattern, TwoLevelPattern


@pytest.fixture
def cfg25():
    """25 x 25 array at 15 mm spacing, the workhorse configuration."""
    return ArrayConfig(25, 0.015)


@pytest.fixture
def cone15():
    return ConePattern(theta_c=np.pi / 12)


@pytest.fixture
def two_level():
    return TwoLevelPattern(theta_c1=np.pi / 24, theta_c2=np.pi / 8)


@pytest.fixture
def sinc6():
    return SincPattern(alpha=6.0)
