import math

import numpy as np
import pytest

from sketchlab.analysis.lemmas import (
    oblique_projection,
    orthonormal_complement,
    validate_gordon,
    validate_square_gaussian_law,
    validate_truncated_haar,
)
from sketchlab.core.sampling import Seed
from sketchlab.errors import DomainError, NumericalError, ShapeError


def check(report, parameter, statistic="sigma_min"):
    return next(c for c in report.checks if c.parameter == parameter and c.statistic == statistic)


def test_square_law_edge_values():
    report = validate_square_gaussian_law(10, [0.0, 10.0], 200, Seed(1))
    assert check(report, 0.0).empirical == 1.0
    assert check(report, 10.0).empirical <= 0.01


def test_square_law_target_value():
    report = validate_square_gaussian_law(50, [0.5], 1, Seed(1))
    assert check(report, 0.5).target == pytest.approx(0.7788, abs=1e-4)
    assert check(report, 0.5).threshold == pytest.approx(0.5 / math.sqrt(50))


@pytest.mark.slow
def test_square_law_matches_exponential_law():
    report = validate_square_gaussian_law(50, [0.25, 0.5, 1.0], 10_000, Seed(2024), workers=4)
    assert report.passed
    for c in report.checks:
        assert abs(c.empirical - math.exp(-(c.parameter**2))) <= 0.02


@pytest.mark.slow
def test_gordon_bounds_hold():
    report = validate_gordon(200, 50, [0.05, 0.2], 2000, Seed(11), workers=4)
    assert report.passed
    assert len(report.checks) == 4


@pytest.mark.slow
def test_truncated_haar_bound_holds():
    report = validate_truncated_haar(40, 10, [0.05, 0.2], 2000, Seed(12), workers=4)
    assert report.passed


def test_haar_with_no_truncation_always_passes():
    report = validate_truncated_haar(6, 0, [0.05], 20, Seed(3))
    assert report.passed
    assert check(report, 0.05).empirical == 1.0


def test_validator_results_do_not_depend_on_workers():
    serial = validate_gordon(30, 10, [0.1], 40, Seed(5), workers=1)
    threaded = validate_gordon(30, 10, [0.1], 40, Seed(5), workers=4)
    assert serial.as_rows() == threaded.as_rows()


def test_report_rows_carry_settings():
    rows = validate_truncated_haar(8, 2, [0.2], 10, Seed(4)).as_rows()
    assert rows[0]["lemma"] == "truncated-haar"
    assert rows[0]["n"] == 8 and rows[0]["r"] == 2 and rows[0]["samples"] == 10


def test_validator_argument_errors():
    with pytest.raises(DomainError):
        validate_gordon(10, 20, [0.1], 10, Seed(0))
    with pytest.raises(DomainError):
        validate_gordon(20, 10, [0.0], 10, Seed(0))
    with pytest.raises(DomainError):
        validate_truncated_haar(5, 5, [0.1], 10, Seed(0))
    with pytest.raises(DomainError):
        validate_square_gaussian_law(5, [-1.0], 10, Seed(0))
    with pytest.raises(DomainError):
        validate_square_gaussian_law(5, [1.0], 0, Seed(0))


def basis(gaussian, n, k, tag):
    q, _ = np.linalg.qr(gaussian(n, k, tag))
    return q


@pytest.mark.parametrize("n, k", [(6, 2), (10, 4), (12, 11)])
def test_oblique_projection_is_idempotent_with_the_right_image_and_kernel(n, k, gaussian):
    v1 = basis(gaussian, n, k, "v1")
    v2_perp = basis(gaussian, n, k, "v2")
    p = oblique_projection(v1, v2_perp)
    assert np.linalg.norm(p @ p - p) <= 1e-8 * max(1.0, np.linalg.norm(p))
    assert np.linalg.norm(p @ v1 - v1) <= 1e-8 * max(1.0, np.linalg.norm(p))
    v2 = orthonormal_complement(v2_perp)
    assert v2.shape == (n, n - k)
    assert np.linalg.norm(p @ v2) <= 1e-8 * max(1.0, np.linalg.norm(p))


def test_oblique_projection_special_cases(gaussian):
    v = basis(gaussian, 8, 3, "v")
    np.testing.assert_allclose(oblique_projection(v, v), v @ v.conj().T, atol=1e-12)
    full = basis(gaussian, 5, 5, "full")
    np.testing.assert_allclose(oblique_projection(full, basis(gaussian, 5, 5, "other")), np.eye(5), atol=1e-10)


def test_oblique_projection_errors(gaussian):
    v = basis(gaussian, 6, 2, "v")
    with pytest.raises(ShapeError):
        oblique_projection(v, basis(gaussian, 6, 3, "w"))
    with pytest.raises(NumericalError):
        oblique_projection(v, orthonormal_complement(v)[:, :2])


def test_orthonormal_complement(gaussian):
    v = gaussian(7, 3)
    comp = orthonormal_complement(v)
    assert comp.shape == (7, 4)
    np.testing.assert_allclose(v.conj().T @ comp, 0, atol=1e-10)
    np.testing.assert_allclose(comp.conj().T @ comp, np.eye(4), atol=1e-12)
