"""
Noisy double-sketch model and recovery.

Given the two sketches Y = S X0 + Z (r x n2) and Y~ = S~ X0^* + Z~ (r x n1),
the estimate of X0 is

    X = Y~^* (S Y~^*)^+ Y                      (naive formula)
    X = Q (S Q)^+ Y,   Y~^* = Q R               (QR form, better conditioned)

Both forms agree whenever Y~ has full rank r. The QR form is the default;
it needs r <= n1, so the naive formula takes over for r > n1.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from sketchlab.constants import REL_TOL
from sketchlab.core.linalg import as_dense, frobenius, numerical_rank, pseudo_inverse, qr, spectral_norm
from sketchlab.errors import DomainError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SketchModel:
    """Ground truth X0 (n1 x n2), sketching matrices S (r x n1), S~ (r x n2), noise."""

    x0: np.ndarray
    s: np.ndarray
    s_tilde: np.ndarray
    z: np.ndarray | None = None
    z_tilde: np.ndarray | None = None

    def __post_init__(self):
        x0 = as_dense(self.x0, "x0")
        s = as_dense(self.s, "s")
        s_tilde = as_dense(self.s_tilde, "s_tilde")
        n1, n2 = x0.shape
        r = s.shape[0]
        if r < 1:
            raise ShapeError("sketch size r must be at least 1")
        if s.shape != (r, n1):
            raise ShapeError(f"s must be {r}x{n1}, got {s.shape}")
        if s_tilde.shape != (r, n2):
            raise ShapeError(f"s_tilde must be {r}x{n2}, got {s_tilde.shape}")
        z = np.zeros((r, n2), dtype=np.complex128) if self.z is None else as_dense(self.z, "z")
        z_tilde = (
            np.zeros((r, n1), dtype=np.complex128)
            if self.z_tilde is None
            else as_dense(self.z_tilde, "z_tilde")
        )
        if z.shape != (r, n2):
            raise ShapeError(f"z must be {r}x{n2}, got {z.shape}")
        if z_tilde.shape != (r, n1):
            raise ShapeError(f"z_tilde must be {r}x{n1}, got {z_tilde.shape}")
        for name, value in (("x0", x0), ("s", s), ("s_tilde", s_tilde), ("z", z), ("z_tilde", z_tilde)):
            object.__setattr__(self, name, value)

    @property
    def r(self):
        return self.s.shape[0]


class SketchPair(NamedTuple):
    y: np.ndarray
    y_tilde: np.ndarray


class RecoveredFactors(NamedTuple):
    """
    X = q @ w with w = (S Q)^+ Y.

    Individual entries only need one inner product, so X never has to be
    materialised.
    """

    q: np.ndarray
    w: np.ndarray

    def entry(self, i, j):
        return complex(np.dot(self.q[i, :], self.w[:, j]))

    def materialize(self):
        return self.q @ self.w


class RecoveryResult(NamedTuple):
    x: np.ndarray
    method: str
    y_tilde_full_rank: bool
    y_tilde_rank: int


def make_sketches(model):
    """(S X0 + Z, S~ X0^* + Z~). X0 is read once per sketch."""
    y = model.s @ model.x0 + model.z
    y_tilde = model.s_tilde @ model.x0.conj().T + model.z_tilde
    return SketchPair(y, y_tilde)


def _check_recovery_shapes(y, y_tilde, s):
    y = as_dense(y, "y")
    y_tilde = as_dense(y_tilde, "y_tilde")
    s = as_dense(s, "s")
    r, n1 = s.shape
    if y.shape[0] != r:
        raise ShapeError(f"y must have {r} rows to match s, got {y.shape}")
    if y_tilde.shape != (r, n1):
        raise ShapeError(f"y_tilde must be {r}x{n1} to match s, got {y_tilde.shape}")
    return y, y_tilde, s


def recover_naive(y, y_tilde, s, rel_tol=REL_TOL):
    y, y_tilde, s = _check_recovery_shapes(y, y_tilde, s)
    y_tilde_h = y_tilde.conj().T
    return y_tilde_h @ (pseudo_inverse(s @ y_tilde_h, rel_tol) @ y)


def qr_factors(y, y_tilde, s, rel_tol=REL_TOL):
    y, y_tilde, s = _check_recovery_shapes(y, y_tilde, s)
    r, n1 = s.shape
    if r > n1:
        raise ShapeError(f"QR recovery needs r <= n1, got r={r}, n1={n1}; use recover_naive")
    q, _ = qr(y_tilde.conj().T)
    return RecoveredFactors(q, pseudo_inverse(s @ q, rel_tol) @ y)


def recover_qr(y, y_tilde, s, rel_tol=REL_TOL):
    return qr_factors(y, y_tilde, s, rel_tol).materialize()


def noiseless_output(x0, s, s_tilde, rel_tol=REL_TOL):
    """X0 S~^* (S X0 S~^*)^+ S X0, the noise-free output of the double sketch."""
    x0 = as_dense(x0, "x0")
    s = as_dense(s, "s")
    s_tilde = as_dense(s_tilde, "s_tilde")
    n1, n2 = x0.shape
    if s.shape[1] != n1 or s_tilde.shape != (s.shape[0], n2):
        raise ShapeError(
            f"incompatible shapes x0 {x0.shape}, s {s.shape}, s_tilde {s_tilde.shape}"
        )
    left = x0 @ s_tilde.conj().T
    sx0 = s @ x0
    return left @ (pseudo_inverse(s @ left, rel_tol) @ sx0)


def y_tilde_has_full_rank(y_tilde, rel_tol=REL_TOL):
    """Full-rank check min(r, n1) on Y~ under the relative rank rule."""
    rank = numerical_rank(y_tilde, rel_tol)
    return rank == min(y_tilde.shape), rank


def recover(y, y_tilde, s, rel_tol=REL_TOL, method="auto"):
    """
    Default recovery path with the Y~ rank check reported, not enforced.

    method: "auto" (QR when r <= n1, naive otherwise), "qr" or "naive".
    """
    r, n1 = np.shape(s)
    if method == "auto":
        method = "qr" if r <= n1 else "naive"
    if method == "qr":
        x = recover_qr(y, y_tilde, s, rel_tol)
    elif method == "naive":
        x = recover_naive(y, y_tilde, s, rel_tol)
    else:
        raise DomainError(f"unknown recovery method {method!r}")
    full_rank, rank = y_tilde_has_full_rank(y_tilde, rel_tol)
    if not full_rank:
        logger.debug("y_tilde has numerical rank %d < %d", rank, min(np.shape(y_tilde)))
    return RecoveryResult(x, method, full_rank, rank)


def recovery_error(x, x0, norm="frobenius"):
    x = np.asarray(x, dtype=np.complex128)
    x0 = np.asarray(x0, dtype=np.complex128)
    if x.shape != x0.shape:
        raise ShapeError(f"cannot compare {x.shape} with {x0.shape}")
    diff = x - x0
    if norm == "frobenius":
        return frobenius(diff)
    if norm == "spectral":
        return spectral_norm(diff)
    raise DomainError(f"unknown norm {norm!r}; expected 'frobenius' or 'spectral'")


def relative_error(x, x0, norm="frobenius"):
    denom = recovery_error(np.zeros_like(x0), x0, norm)
    err = recovery_error(x, x0, norm)
    return err / denom if denom > 0 else err
