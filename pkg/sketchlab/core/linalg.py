"""
Dense complex linear algebra primitives.

Matrices are plain numpy arrays of dtype complex128 (interleaved re/im
float64, matching the TNS1 payload layout). Every function here is a pure
function of its inputs; arrays returned are fresh and never alias the input.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg

from sketchlab.constants import REL_TOL
from sketchlab.errors import DomainError, NumericalError, ShapeError

logger = logging.getLogger(__name__)


class SvdResult(NamedTuple):
    """Thin SVD a = u @ diag(singular_values) @ vt, k = min(m, n)."""

    u: np.ndarray
    singular_values: np.ndarray
    vt: np.ndarray


def as_dense(a, name="matrix"):
    """Coerce to a finite 2-D complex128 array, raising ShapeError/DomainError."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def frobenius(a):
    """Frobenius norm of an array of any rank (2-norm of the flattened entries)."""
    return float(np.linalg.norm(np.asarray(a)))


def _lapack_svd(a, full_matrices):
    try:
        return scipy.linalg.svd(a, full_matrices=full_matrices, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge where the slower gesvd does not
        logger.debug("gesdd did not converge on %s input, retrying with gesvd", a.shape)
    try:
        return scipy.linalg.svd(a, full_matrices=full_matrices, lapack_driver="gesvd")
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge for {a.shape} matrix: {exc}") from exc


def svd(a):
    a = as_dense(a)
    m, n = a.shape
    k = min(m, n)
    if k == 0:
        return SvdResult(
            np.zeros((m, 0), dtype=np.complex128),
            np.zeros(0),
            np.zeros((0, n), dtype=np.complex128),
        )
    u, s, vt = _lapack_svd(a, full_matrices=False)
    return SvdResult(u, s, vt)


def full_svd(a):
    """SVD with square unitary factors (m x m, n x n); singular values length min(m, n)."""
    a = as_dense(a)
    m, n = a.shape
    if min(m, n) == 0:
        return SvdResult(
            np.eye(m, dtype=np.complex128), np.zeros(0), np.eye(n, dtype=np.complex128)
        )
    u, s, vt = _lapack_svd(a, full_matrices=True)
    return SvdResult(u, s, vt)


def singular_values(a):
    a = as_dense(a)
    if min(a.shape) == 0:
        return np.zeros(0)
    try:
        return scipy.linalg.svdvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular values did not converge: {exc}") from exc


def _qr_canonical_completion(a, tol):
    """Modified Gram-Schmidt QR; a column with residual norm <= tol is replaced by a canonical vector."""
    m, k = a.shape
    q = np.zeros((m, k), dtype=np.complex128)
    r = np.zeros((k, k), dtype=np.complex128)
    basis = np.eye(m, dtype=np.complex128)
    for j in range(k):
        done = q[:, :j]
        v = a[:, j].copy()
        for _ in range(2):  # reorthogonalise once
            coeff = done.conj().T @ v
            r[:j, j] += coeff
            v -= done @ coeff
        norm = np.linalg.norm(v)
        if norm > tol:
            q[:, j] = v / norm
            r[j, j] = norm
            continue
        residual = basis - done @ (done.conj().T @ basis)
        residual -= done @ (done.conj().T @ residual)
        lengths = np.linalg.norm(residual, axis=0)
        pick = int(np.argmax(lengths))  # first e_i farthest from the span so far
        q[:, j] = residual[:, pick] / lengths[pick]
    return q, r


def qr(a):
    """
    Economic QR a = q @ r with q (m x k) orthonormal and r (k x k) upper triangular.

    The diagonal of r is real and nonnegative. A column that adds nothing
    beyond the span of the previous ones (residual at most REL_TOL * ||a||_F)
    gets a zero diagonal entry and, as its q column, the canonical basis vector
    e_i with the largest component outside the span of the earlier q columns,
    orthogonalised against them. For qr(zeros) this gives the leading columns
    of the identity.
    """
    a = as_dense(a)
    m, k = a.shape
    if m < k:
        raise ShapeError(f"qr needs rows >= cols, got {m}x{k}")
    if k == 0:
        return np.zeros((m, 0), dtype=np.complex128), np.zeros((0, 0), dtype=np.complex128)
    tol = REL_TOL * frobenius(a)
    q, r = scipy.linalg.qr(a, mode="economic")
    d = np.diag(r)
    modulus = np.abs(d)
    if np.any(modulus <= tol):
        logger.debug("qr: %d zero pivots in %s input", int(np.sum(modulus <= tol)), a.shape)
        return _qr_canonical_completion(a, tol)
    phase = d / modulus
    q = q * phase
    r = np.conj(phase)[:, None] * r
    r[np.diag_indices(k)] = modulus
    return q, r


def pseudo_inverse(a, rel_tol=REL_TOL):
    """
    Moore-Penrose pseudo-inverse via thresholded SVD.

    Singular values at or below rel_tol * sigma_max are treated as zero.
    """
    if rel_tol <= 0:
        raise DomainError(f"rel_tol must be positive, got {rel_tol}")
    a = as_dense(a)
    m, n = a.shape
    u, s, vt = svd(a)
    if s.size == 0 or s[0] == 0:
        return np.zeros((n, m), dtype=np.complex128)
    keep = s > rel_tol * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (vt.conj().T * inv) @ u.conj().T


def numerical_rank(a, rel_tol=REL_TOL):
    s = singular_values(a)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def sigma_min_nonzero(a, rel_tol=REL_TOL):
    """Smallest singular value exceeding rel_tol * sigma_max."""
    s = singular_values(a)
    if s.size == 0 or s[0] == 0:
        raise DomainError("sigma_min_nonzero of an all-zero matrix is undefined")
    return float(s[s > rel_tol * s[0]][-1])


def sigma_k(a, k):
    """k-th largest singular value (1-indexed); zero beyond min(m, n)."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    s = singular_values(a)
    if k > s.size:
        return 0.0
    return float(s[k - 1])


def spectral_norm(a):
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0
