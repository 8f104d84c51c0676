import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


def random_rgb(rng, shape=(16, 16)):
    """Random linear RGB image, bounded away from pure black."""
    return rng.uniform(0.01, 1.0, (*shape, 3))


def random_luminance(rng, shape=(16, 16), lo=0.005, hi=1.0):
    return rng.uniform(lo, hi, shape)
