import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_zeros(rng, d, rmax=0.95):
    r = rng.uniform(0, rmax, d)
    return r * np.exp(1j * rng.uniform(0, 2 * np.pi, d))
