import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sketchlab.core.sampling import Seed, sample_complex_gaussian
from sketchlab.tensors.tensor3 import Tensor3

settings.register_profile(
    "sketchlab",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("sketchlab")


def relative_residual(actual, expected):
    """||actual - expected||_F / max(1, ||expected||_F) for matrices or Tensor3."""
    actual = actual.data if isinstance(actual, Tensor3) else np.asarray(actual)
    expected = expected.data if isinstance(expected, Tensor3) else np.asarray(expected)
    return float(np.linalg.norm((actual - expected).ravel()) / max(1.0, np.linalg.norm(expected.ravel())))


@pytest.fixture
def residual():
    return relative_residual


@pytest.fixture
def seed():
    return Seed(20240611)


@pytest.fixture
def gaussian(seed):
    """Seeded complex Gaussian matrices: gaussian(rows, cols, *tag)."""

    def draw(rows, cols, *tag):
        return sample_complex_gaussian(rows, cols, seed.child("fixture", *tag))

    return draw


@pytest.fixture
def gaussian_tensor(seed):
    def draw(n1, n2, n3, *tag):
        return Tensor3(sample_complex_gaussian(n1, n2 * n3, seed.child("tensor", *tag)).reshape(n1, n2, n3))

    return draw


@pytest.fixture
def low_rank(gaussian):
    """Rank-k n1 x n2 product of Gaussian factors."""

    def draw(n1, n2, k, *tag):
        return gaussian(n1, k, "left", *tag) @ gaussian(k, n2, "right", *tag)

    return draw
