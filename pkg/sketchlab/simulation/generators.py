import logging

import numpy as np

from sketchlab.constants import RANK_REL_TOL
from sketchlab.core.linalg import frobenius, numerical_rank, qr
from sketchlab.core.sampling import sample_complex_gaussian, sample_real_gaussian
from sketchlab.errors import DomainError
from sketchlab.tensors.tensor3 import Tensor3
from sketchlab.tensors.tproduct import t_product_fft

logger = logging.getLogger(__name__)


def _sampler(field):
    if field == "complex":
        return sample_complex_gaussian
    if field == "real":
        return sample_real_gaussian
    raise DomainError(f"unknown field {field!r}; expected 'real' or 'complex'")


def gen_lowrank_matrix(n1, n2, r0, seed, field="complex"):
    """
    Rank-r0 target G1 @ G2 with Gaussian factors G1 (n1 x r0), G2 (r0 x n2).

    The product has rank exactly r0 with probability one.
    """
    if not 0 <= r0 <= min(n1, n2):
        raise DomainError(f"r0 must lie in [0, min(n1, n2)] = [0, {min(n1, n2)}], got {r0}")
    sample = _sampler(field)
    left = sample(n1, r0, seed.child("left"))
    right = sample(r0, n2, seed.child("right"))
    product = left @ right
    rank = numerical_rank(product, RANK_REL_TOL)
    if rank != r0:
        logger.warning("rank-%d target came out with numerical rank %d", r0, rank)
    return product


def gen_lowtubal_tensor(n1, n2, n3, r0, seed, field="complex"):
    """
    Tubal-rank-r0 target as the t-product of Gaussian n1 x r0 x n3 and r0 x n2 x n3 tensors.

    Draws use the same seed children as gen_lowrank_matrix, so n3 = 1 gives the
    same factors as the matrix generator.
    """
    if not 0 <= r0 <= min(n1, n2):
        raise DomainError(f"r0 must lie in [0, min(n1, n2)] = [0, {min(n1, n2)}], got {r0}")
    sample = _sampler(field)
    left = Tensor3(sample(n1, r0 * n3, seed.child("left")).reshape(n1, r0, n3))
    right = Tensor3(sample(r0, n2 * n3, seed.child("right")).reshape(r0, n2, n3))
    product = t_product_fft(left, right)
    if field == "real":
        # the Fourier round trip leaves rounding-level imaginary parts
        product = product.real
    return product


def gen_approx_lowrank_matrix(n1, n2, r0, decay, seed, field="complex"):
    """
    Approximately rank-r0 target U diag(sigma) V^* with sigma_i = 1 for i <= r0
    and sigma_i = decay ** (i - r0) beyond; sigma_{r0+1}(X0) = decay.
    """
    if not 0 <= r0 <= min(n1, n2):
        raise DomainError(f"r0 must lie in [0, min(n1, n2)], got {r0}")
    if not 0 < decay < 1:
        raise DomainError(f"decay must lie in (0, 1), got {decay}")
    sample = _sampler(field)
    p = min(n1, n2)
    u, _ = qr(sample(n1, p, seed.child("left")))
    v, _ = qr(sample(n2, p, seed.child("right")))
    sigma = np.ones(p)
    tail = np.arange(1, p - r0 + 1)
    sigma[r0:] = decay**tail
    return (u * sigma) @ v.conj().T


def scale_to_frobenius(m, target):
    """Rescale a matrix or Tensor3 to Frobenius norm `target`."""
    if target < 0:
        raise DomainError(f"target norm must be nonnegative, got {target}")
    data = m.data if isinstance(m, Tensor3) else np.asarray(m, dtype=np.complex128)
    norm = frobenius(data)
    if target == 0:
        scaled = np.zeros_like(data)
    elif norm == 0:
        raise DomainError("cannot rescale a zero object to a positive norm")
    else:
        scaled = data * (target / norm)
    return Tensor3(scaled) if isinstance(m, Tensor3) else scaled
