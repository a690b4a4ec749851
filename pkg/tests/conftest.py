import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_unit_vector(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_mixed_bloch(rng, max_radius: float = 0.99) -> np.ndarray:
    # Radius scaled to stay clearly inside the ball, away from the pure shell.
    return random_unit_vector(rng) * rng.uniform(0.0, max_radius)
