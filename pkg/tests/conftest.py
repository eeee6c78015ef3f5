import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

MASSES = [0.0, 0.25, 0.5, 1.0, 0.3j, 1.7j]
REAL_MASSES = [0.0, 0.25, 1.0, 0.3j, 1.7j]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def wedge_point(u, v, w, t_max=5.0, t_min=0.05):
    """Map a point of the unit cube to an admissible (r, t, b)."""
    t = t_min + (t_max - t_min) * u
    b = t * v
    r = w * (np.exp(-b) - np.exp(-t))
    return r, t, b
