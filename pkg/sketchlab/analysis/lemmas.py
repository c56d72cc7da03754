"""
Random-matrix facts the recovery guarantees rest on, checked by Monte Carlo,
plus the oblique projection formula used in the error analysis.

Each validator draws `samples` independent matrices, every one from its own
Seed child, and compares empirical frequencies with the stated probability.
A check passes when the frequency clears the target minus a 3-sigma binomial
half-width (plus 0.005 absolute slack for the two-sided exact law).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from sketchlab.constants import ABS_SLACK, REL_TOL, SIGMA_MULTIPLIER
from sketchlab.core.linalg import as_dense, singular_values
from sketchlab.core.parallel import ordered_map
from sketchlab.core.sampling import sample_complex_gaussian, sample_haar_unitary
from sketchlab.errors import DomainError, NumericalError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LemmaCheck:
    statistic: str
    parameter: float
    threshold: float
    empirical: float
    target: float
    tolerance: float
    passed: bool


@dataclass
class LemmaReport:
    lemma: str
    samples: int
    settings: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_rows(self):
        return [
            {"lemma": self.lemma, "samples": self.samples, **self.settings, **c.__dict__}
            for c in self.checks
        ]


def orthonormal_complement(v):
    """Orthonormal basis of the orthogonal complement of the column span of v."""
    v = as_dense(v, "v")
    return scipy.linalg.null_space(v.conj().T)


def oblique_projection(v1, v2_perp, rel_tol=REL_TOL):
    """
    P = V1 (V2perp^* V1)^{-1} V2perp^*.

    P is idempotent with image span(V1) and kernel span(V2), V2 being the
    orthogonal complement of V2perp.
    """
    v1 = as_dense(v1, "v1")
    v2_perp = as_dense(v2_perp, "v2_perp")
    if v1.shape != v2_perp.shape:
        raise ShapeError(f"v1 and v2_perp must share shape, got {v1.shape} and {v2_perp.shape}")
    coupling = v2_perp.conj().T @ v1
    s = singular_values(coupling)
    if s.size and (s[0] == 0 or s[-1] <= rel_tol * s[0]):
        raise NumericalError("V2perp^* V1 is singular; the subspaces do not form a complementary pair")
    return v1 @ scipy.linalg.solve(coupling, v2_perp.conj().T)


def _binomial_half_width(p, samples):
    return SIGMA_MULTIPLIER * math.sqrt(max(p * (1 - p), 0.0) / samples)


def _check_samples(samples):
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")


def _check_delta(delta):
    if not 0 < delta <= 1:
        raise DomainError(f"delta must lie in (0, 1], got {delta}")


def validate_square_gaussian_law(n, eps_grid, samples, seed, workers=1):
    """P(sigma_min(A) >= eps / sqrt(n)) = exp(-eps^2) for n x n complex Gaussian A."""
    _check_samples(samples)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")

    def draw(k):
        return singular_values(sample_complex_gaussian(n, n, seed.child("square", k)))[-1]

    sigma_min = np.asarray(ordered_map(draw, range(samples), workers))
    report = LemmaReport("square-gaussian", samples, {"n": n})
    for eps in eps_grid:
        if eps < 0:
            raise DomainError(f"eps must be nonnegative, got {eps}")
        threshold = eps / math.sqrt(n)
        freq = float(np.mean(sigma_min >= threshold))
        target = math.exp(-(eps**2))
        tol = _binomial_half_width(target, samples) + ABS_SLACK
        report.checks.append(
            LemmaCheck("sigma_min", eps, threshold, freq, target, tol, abs(freq - target) <= tol)
        )
    logger.info("square gaussian law n=%d: %s", n, "pass" if report.passed else "FAIL")
    return report


def validate_gordon(m, n, delta_grid, samples, seed, workers=1):
    """Extreme singular values of an m x n (m > n) complex Gaussian matrix."""
    _check_samples(samples)
    if m <= n:
        raise DomainError(f"extreme singular value bounds need m > n, got m={m}, n={n}")

    def draw(k):
        s = singular_values(sample_complex_gaussian(m, n, seed.child("gordon", k)))
        return s[-1], s[0]

    extremes = np.asarray(ordered_map(draw, range(samples), workers))
    sigma_min, sigma_max = extremes[:, 0], extremes[:, 1]
    report = LemmaReport("gordon", samples, {"m": m, "n": n})
    for delta in delta_grid:
        _check_delta(delta)
        slack = math.sqrt(math.log(1 / delta))
        lower = math.sqrt(m) - math.sqrt(n) - slack
        upper = math.sqrt(m) + math.sqrt(n) + slack
        freq_min = float(np.mean(sigma_min >= lower))
        freq_max = float(np.mean(sigma_max <= upper))
        tol = _binomial_half_width(delta, samples)
        required = 1 - delta - tol
        report.checks.append(LemmaCheck("sigma_min", delta, lower, freq_min, 1 - delta, tol, freq_min >= required))
        report.checks.append(LemmaCheck("sigma_max", delta, upper, freq_max, 1 - delta, tol, freq_max >= required))
    logger.info("gordon bounds m=%d n=%d: %s", m, n, "pass" if report.passed else "FAIL")
    return report


def validate_truncated_haar(n, r, delta_grid, samples, seed, workers=1):
    """sigma_min of the upper-left (n-r) x (n-r) corner of a Haar unitary."""
    _check_samples(samples)
    if not 0 <= r < n:
        raise DomainError(f"need 0 <= r < n, got r={r}, n={n}")
    k = n - r

    def draw(j):
        u = sample_haar_unitary(n, seed.child("haar", j))
        return singular_values(u[:k, :k])[-1]

    sigma_min = np.asarray(ordered_map(draw, range(samples), workers))
    report = LemmaReport("truncated-haar", samples, {"n": n, "r": r})
    for delta in delta_grid:
        _check_delta(delta)
        # r = 0: the corner is the whole unitary and the bound degenerates
        threshold = math.sqrt(delta) / math.sqrt(r * k) if r > 0 else 0.0
        freq = float(np.mean(sigma_min >= threshold))
        tol = _binomial_half_width(delta, samples)
        report.checks.append(
            LemmaCheck("sigma_min", delta, threshold, freq, 1 - delta, tol, freq >= 1 - delta - tol)
        )
    logger.info("truncated haar n=%d r=%d: %s", n, r, "pass" if report.passed else "FAIL")
    return report
