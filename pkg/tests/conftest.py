import numpy as np
import pytest

from app import state


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def uniform_image(rng: np.random.Generator):
    def make(size: int, high: float = 255.0) -> np.ndarray:
        return rng.uniform(0.0, high, size=(size, size))

    return make


@pytest.fixture(autouse=True)
def no_worker_pool():
    previous = state.executor
    state.executor = None
    yield
    state.executor = previous
