"""
t-product algebra for order-3 tensors.

The mode-3 transform exposed here is the UNITARY DFT (1/sqrt(n3) both ways),
so it preserves Frobenius norms. Under that convention the t-product of two
tensors becomes sqrt(n3) times the slicewise matrix product in the Fourier
domain; t_product_fft applies that factor before transforming back. The
t-SVD works with the unnormalized transform internally, where bcirc is
block-diagonalised exactly, and returns factors in the spatial domain.
"""

import logging

import numpy as np

from sketchlab.constants import TUBE_REL_TOL
from sketchlab.core.linalg import frobenius, full_svd, svd
from sketchlab.errors import DomainError, ShapeError
from sketchlab.tensors.tensor3 import Tensor3, TSVDFactors

logger = logging.getLogger(__name__)


def identity_tensor(n, n3):
    """Identity for the t-product: I_n as frontal slice 1, zeros elsewhere."""
    return Tensor3.first_slice_only(np.eye(n), n3)


def unfold(a):
    """Stack the frontal slices A_1, ..., A_n3 vertically (n1*n3 x n2)."""
    return a.data.transpose(2, 0, 1).reshape(a.n3 * a.n1, a.n2).copy()


def fold(m, n1, n2, n3):
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (n1 * n3, n2):
        raise ShapeError(f"fold to {n1}x{n2}x{n3} needs a {n1 * n3}x{n2} matrix, got {m.shape}")
    return Tensor3(m.reshape(n3, n1, n2).transpose(1, 2, 0))


def bcirc(a):
    """Block circulant matrix: block (i, j) is A_{(i - j) mod n3} (0-indexed)."""
    n1, n2, n3 = a.shape
    out = np.empty((n1 * n3, n2 * n3), dtype=np.complex128)
    for i in range(n3):
        for j in range(n3):
            out[i * n1 : (i + 1) * n1, j * n2 : (j + 1) * n2] = a.data[:, :, (i - j) % n3]
    return out


def conj_transpose(a):
    """Conjugate-transpose every frontal slice, then reverse the order of slices 2..n3."""
    order = (-np.arange(a.n3)) % a.n3
    return Tensor3(a.data.conj().transpose(1, 0, 2)[:, :, order])


def _check_product_shapes(a, b):
    if a.n3 != b.n3:
        raise ShapeError(f"t-product needs equal tube length, got {a.n3} and {b.n3}")
    if a.n2 != b.n1:
        raise ShapeError(f"t-product inner dimensions differ: {a.shape} * {b.shape}")


def t_product_ref(a, b):
    """Literal fold(bcirc(a) @ unfold(b)); the reference path."""
    _check_product_shapes(a, b)
    return fold(bcirc(a) @ unfold(b), a.n1, b.n2, a.n3)


def _slicewise_matmul(a_hat, b_hat):
    # (n1, l, n3) x (l, n2, n3) -> (n1, n2, n3), one matrix product per frontal slice
    return np.matmul(a_hat.transpose(2, 0, 1), b_hat.transpose(2, 0, 1)).transpose(1, 2, 0)


def t_product_fft(a, b):
    _check_product_shapes(a, b)
    a_hat = np.fft.fft(a.data, axis=2, norm="ortho")
    b_hat = np.fft.fft(b.data, axis=2, norm="ortho")
    c_hat = np.sqrt(a.n3) * _slicewise_matmul(a_hat, b_hat)
    return Tensor3(np.fft.ifft(c_hat, axis=2, norm="ortho"))


t_product = t_product_fft


def mode3_fft(a):
    """Unitary DFT along every tube a[i, j, :]."""
    return Tensor3(np.fft.fft(a.data, axis=2, norm="ortho"))


def mode3_ifft(a):
    return Tensor3(np.fft.ifft(a.data, axis=2, norm="ortho"))


def t_svd(m):
    """
    t-SVD m = u * s * v^*.

    Each frontal slice of the (unnormalized) Fourier transform of m gets a full
    SVD, so u is n1 x n1 x n3 and v is n2 x n2 x n3 exactly, and the factors are
    brought back with the inverse transform. The unitary transform of s has
    real, nonnegative, nonincreasing diagonal slices.
    """
    n1, n2, n3 = m.shape
    m_hat = np.fft.fft(m.data, axis=2)
    u_hat = np.empty((n1, n1, n3), dtype=np.complex128)
    s_hat = np.zeros((n1, n2, n3), dtype=np.complex128)
    v_hat = np.empty((n2, n2, n3), dtype=np.complex128)
    p = min(n1, n2)
    for k in range(n3):
        u, sv, vt = full_svd(m_hat[:, :, k])
        u_hat[:, :, k] = u
        s_hat[np.arange(p), np.arange(p), k] = sv
        v_hat[:, :, k] = vt.conj().T
    return TSVDFactors(
        Tensor3(np.fft.ifft(u_hat, axis=2)),
        Tensor3(np.fft.ifft(s_hat, axis=2)),
        Tensor3(np.fft.ifft(v_hat, axis=2)),
    )


def fourier_singular_values(m):
    """
    Singular values of every unnormalized Fourier slice, shape (min(n1, n2), n3).

    Column k is nonincreasing; row i is the Fourier transform of the i-th
    singular tube (up to the transform scaling).
    """
    m_hat = np.fft.fft(m.data, axis=2)
    p = min(m.n1, m.n2)
    out = np.zeros((p, m.n3))
    for k in range(m.n3):
        out[:, k] = svd(m_hat[:, :, k]).singular_values
    return out


def singular_tube_norms(m):
    """||s[i, i, :]||_2 for every singular tube, via Parseval on the Fourier slices."""
    sigma = fourier_singular_values(m)
    return np.sqrt(np.sum(sigma**2, axis=1) / m.n3)


def tubal_rank(m, rel_tol=TUBE_REL_TOL):
    norms = singular_tube_norms(m)
    if norms.size == 0 or norms[0] == 0:
        return 0
    return int(np.count_nonzero(norms > rel_tol * norms[0]))


def truncate_tsvd(m, k):
    """
    Best tubal-rank-k approximation and its squared error.

    Returns (approx, tail_energy) with tail_energy = sum_{i > k} ||s[i, i, :]||^2,
    which equals ||approx - m||_F^2.
    """
    n1, n2, n3 = m.shape
    p = min(n1, n2)
    if not 0 <= k <= p:
        raise DomainError(f"truncation rank must lie in [0, {p}], got {k}")
    m_hat = np.fft.fft(m.data, axis=2)
    approx_hat = np.zeros_like(m_hat)
    tail = 0.0
    for j in range(n3):
        u, sv, vt = svd(m_hat[:, :, j])
        approx_hat[:, :, j] = (u[:, :k] * sv[:k]) @ vt[:k]
        tail += float(np.sum(sv[k:] ** 2))
    tail /= n3
    logger.debug("truncated %s to tubal rank %d, tail energy %.3e", m, k, tail)
    return Tensor3(np.fft.ifft(approx_hat, axis=2)), tail


def tensor_frobenius(m):
    return frobenius(m.data)
