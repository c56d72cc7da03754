from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from sketchlab.errors import DomainError, ShapeError


@dataclass(frozen=True, eq=False)
class Tensor3:
    """
    Order-3 complex tensor of shape n1 x n2 x n3.

    Stored as one (n1, n2, n3) complex128 array; frontal slice k is
    data[:, :, k]. The array is copied on construction and made read-only.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, copy=True)
        if arr.ndim != 3:
            raise ShapeError(f"Tensor3 needs a 3-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("Tensor3 has non-finite entries")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, n1, n2, n3):
        return cls(np.zeros((n1, n2, n3), dtype=np.complex128))

    @classmethod
    def from_slices(cls, slices):
        slices = [np.asarray(s, dtype=np.complex128) for s in slices]
        if not slices:
            raise ShapeError("from_slices needs at least one frontal slice")
        shapes = {s.shape for s in slices}
        if len(shapes) != 1:
            raise ShapeError(f"frontal slices differ in shape: {sorted(shapes)}")
        return cls(np.stack(slices, axis=2))

    @classmethod
    def first_slice_only(cls, matrix, n3):
        """Tensor with `matrix` as frontal slice 1 and zero slices 2..n3."""
        matrix = np.asarray(matrix, dtype=np.complex128)
        data = np.zeros(matrix.shape + (n3,), dtype=np.complex128)
        data[:, :, 0] = matrix
        return cls(data)

    @property
    def shape(self):
        return self.data.shape

    @property
    def n1(self):
        return self.data.shape[0]

    @property
    def n2(self):
        return self.data.shape[1]

    @property
    def n3(self):
        return self.data.shape[2]

    def frontal(self, k):
        """Frontal slice k (0-indexed) as a fresh matrix."""
        return self.data[:, :, k].copy()

    @property
    def slices(self):
        return [self.frontal(k) for k in range(self.n3)]

    @property
    def real(self):
        return Tensor3(self.data.real)

    def __add__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeError(f"cannot add tensors {self.shape} and {other.shape}")
        return Tensor3(self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeError(f"cannot subtract tensors {self.shape} and {other.shape}")
        return Tensor3(self.data - other.data)

    def __mul__(self, scalar):
        if isinstance(scalar, Tensor3):
            return NotImplemented
        return Tensor3(self.data * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Tensor3(n1={self.n1}, n2={self.n2}, n3={self.n3})"


class TSVDFactors(NamedTuple):
    """t-SVD factors m = u * s * v^* with unitary u, v and f-diagonal s."""

    u: Tensor3
    s: Tensor3
    v: Tensor3
