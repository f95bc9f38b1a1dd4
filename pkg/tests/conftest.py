import numpy as np
import pytest


def random_antisymmetric(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Exactly antisymmetric random generator (strict upper triangle minus its transpose)."""
    upper = np.triu(rng.uniform(-scale, scale, (dim, dim)), 1)
    return upper - upper.T


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
