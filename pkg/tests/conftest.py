import numpy as np
import pytest


@pytest.fixture
def hand_sample() -> np.ndarray:
    """Five-point worked example used throughout: trim at d=2 keeps |x| <= 3."""
    return np.array([3.0, -1.0, 0.5, -4.0, 2.0])
