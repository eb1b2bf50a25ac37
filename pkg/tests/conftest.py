import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from packdim import DiscreteMeasure

# A frozen artifact should not be flaky: derandomize makes hypothesis
# replay the same cases on every run.
settings.register_profile(
    "frozen",
    derandomize=True,
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("frozen")


def random_measure(rng, dim, max_atoms=16, spread=1.0):
    n = int(rng.integers(1, max_atoms + 1))
    atoms = rng.normal(0.0, spread, (n, dim))
    w = rng.random(n)
    return DiscreteMeasure(atoms, w / w.sum())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
