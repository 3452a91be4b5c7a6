import os

import numpy as np
import pytest

CACHE_DIR = os.path.join(os.path.dirname(__file__), "_cache")


@pytest.fixture(scope="session")
def cache_dir():
    """Persistent simulation cache; identical seeds make reuse exact."""
    os.makedirs(CACHE_DIR, exist_ok=True)
    return CACHE_DIR


@pytest.fixture(scope="session", autouse=True)
def _service_cache_env():
    os.environ.setdefault("EXPGOF_CACHE_DIR", CACHE_DIR)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
