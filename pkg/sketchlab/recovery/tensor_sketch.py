"""
Double sketching of order-3 tensors under the t-product.

The sketching tensors carry S (resp. S~) as frontal slice 1 and zeros
elsewhere, so the sketches are

    Y = S * X0 + Z,    Y~ = S~ * X0^* + Z~.

Recovery moves Y and Y~ into the Fourier domain, runs the matrix recovery on
every frontal slice and transforms back. With the unitary transform the sketch
tensor's slices are S / sqrt(n3) while the slicewise law of the t-product reads
Y^_k = sqrt(n3) S^_k X0^_k + Z^_k, so each slice is recovered with the effective
sketch sqrt(n3) S^_k (which equals S for every k).
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from sketchlab.constants import REL_TOL
from sketchlab.core.linalg import as_dense
from sketchlab.core.parallel import ordered_map
from sketchlab.errors import NumericalError, ShapeError
from sketchlab.recovery.matrix_sketch import recover
from sketchlab.tensors.tensor3 import Tensor3
from sketchlab.tensors.tproduct import conj_transpose, mode3_fft, mode3_ifft, t_product_fft

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TensorSketchModel:
    x0: Tensor3
    s: np.ndarray
    s_tilde: np.ndarray
    z: Tensor3 | None = None
    z_tilde: Tensor3 | None = None

    def __post_init__(self):
        n1, n2, n3 = self.x0.shape
        s = as_dense(self.s, "s")
        s_tilde = as_dense(self.s_tilde, "s_tilde")
        r = s.shape[0]
        if s.shape != (r, n1):
            raise ShapeError(f"s must be {r}x{n1}, got {s.shape}")
        if s_tilde.shape != (r, n2):
            raise ShapeError(f"s_tilde must be {r}x{n2}, got {s_tilde.shape}")
        z = Tensor3.zeros(r, n2, n3) if self.z is None else self.z
        z_tilde = Tensor3.zeros(r, n1, n3) if self.z_tilde is None else self.z_tilde
        if z.shape != (r, n2, n3):
            raise ShapeError(f"z must be {r}x{n2}x{n3}, got {z.shape}")
        if z_tilde.shape != (r, n1, n3):
            raise ShapeError(f"z_tilde must be {r}x{n1}x{n3}, got {z_tilde.shape}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "s_tilde", s_tilde)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "z_tilde", z_tilde)

    @property
    def r(self):
        return self.s.shape[0]

    @property
    def sketch_tensor(self):
        return Tensor3.first_slice_only(self.s, self.x0.n3)

    @property
    def sketch_tensor_tilde(self):
        return Tensor3.first_slice_only(self.s_tilde, self.x0.n3)


class TensorSketchPair(NamedTuple):
    y: Tensor3
    y_tilde: Tensor3


class TensorRecoveryResult(NamedTuple):
    x: Tensor3
    slice_full_rank: tuple
    methods: tuple

    @property
    def y_tilde_full_rank(self):
        return all(self.slice_full_rank)


def make_tensor_sketches(model):
    y = t_product_fft(model.sketch_tensor, model.x0) + model.z
    y_tilde = t_product_fft(model.sketch_tensor_tilde, conj_transpose(model.x0)) + model.z_tilde
    return TensorSketchPair(y, y_tilde)


def effective_fourier_sketch(s, n3):
    """Per-slice sketches sqrt(n3) * mode3_fft(S as first slice), shape (r, n1, n3)."""
    s_hat = mode3_fft(Tensor3.first_slice_only(s, n3))
    return np.sqrt(n3) * s_hat.data


def _check_tensor_shapes(y, y_tilde, s):
    s = as_dense(s, "s")
    r, n1 = s.shape
    if y.n1 != r or y_tilde.n1 != r:
        raise ShapeError(f"sketch tensors need {r} rows, got {y.shape} and {y_tilde.shape}")
    if y_tilde.n2 != n1:
        raise ShapeError(f"y_tilde must be {r}x{n1}x{y.n3}, got {y_tilde.shape}")
    if y.n3 != y_tilde.n3:
        raise ShapeError(f"tube lengths differ: {y.n3} and {y_tilde.n3}")
    return s


def recover_tensor_with_flags(y, y_tilde, s, rel_tol=REL_TOL, method="auto", workers=1):
    s = _check_tensor_shapes(y, y_tilde, s)
    n3 = y.n3
    y_hat = mode3_fft(y).data
    y_tilde_hat = mode3_fft(y_tilde).data
    s_eff = effective_fourier_sketch(s, n3)

    def solve(k):
        try:
            return recover(y_hat[:, :, k], y_tilde_hat[:, :, k], s_eff[:, :, k], rel_tol, method)
        except NumericalError as exc:
            raise NumericalError(str(exc), slice_index=k) from exc

    results = ordered_map(solve, range(n3), workers)

    x_hat = np.stack([res.x for res in results], axis=2)
    flags = tuple(res.y_tilde_full_rank for res in results)
    if not all(flags):
        logger.debug("y_tilde rank-deficient on Fourier slices %s", [k for k, f in enumerate(flags) if not f])
    return TensorRecoveryResult(
        mode3_ifft(Tensor3(x_hat)), flags, tuple(res.method for res in results)
    )


def recover_tensor(y, y_tilde, s, rel_tol=REL_TOL):
    return recover_tensor_with_flags(y, y_tilde, s, rel_tol).x


def recover_slicewise(y, y_tilde, s_slices, rel_tol=REL_TOL):
    """
    Matrix recovery applied to each spatial frontal slice separately.

    `s_slices` is one sketching matrix shared by all slices or a sequence of
    n3 matrices, one per slice.
    """
    n3 = y.n3
    if isinstance(s_slices, np.ndarray) and s_slices.ndim == 2:
        s_slices = [s_slices] * n3
    if len(s_slices) != n3:
        raise ShapeError(f"need {n3} sketching matrices, got {len(s_slices)}")
    out = []
    for k in range(n3):
        try:
            out.append(recover(y.frontal(k), y_tilde.frontal(k), s_slices[k], rel_tol).x)
        except NumericalError as exc:
            raise NumericalError(str(exc), slice_index=k) from exc
    return Tensor3.from_slices(out)
