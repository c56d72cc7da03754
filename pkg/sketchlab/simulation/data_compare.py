"""
Tensor recovery against slice-by-slice matrix recovery on a tensor read from disk.

Strategies, all fed the same noise tensors:
    tensor            t-product sketches with one S, S~ and Fourier-domain recovery
    slicewise-fresh   matrix recovery per frontal slice, fresh S_k, S~_k per slice
    slicewise-shared  matrix recovery per frontal slice, one S, S~ for every slice
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from sketchlab.constants import ROLE_S, ROLE_S_TILDE, ROLE_Z, ROLE_Z_TILDE
from sketchlab.core.linalg import frobenius
from sketchlab.core.sampling import sample_complex_gaussian, sample_gaussian
from sketchlab.errors import DomainError
from sketchlab.io.tensor_file import load_tensor_file_with_kind
from sketchlab.recovery.tensor_sketch import (
    TensorSketchModel,
    make_tensor_sketches,
    recover_slicewise,
    recover_tensor,
)
from sketchlab.simulation.generators import scale_to_frobenius
from sketchlab.tensors.tensor3 import Tensor3
from sketchlab.tensors.tproduct import tensor_frobenius

logger = logging.getLogger(__name__)

STRATEGIES = ("tensor", "slicewise-fresh", "slicewise-shared")
_COMPLEX_BYTES = 16


@dataclass(frozen=True)
class StrategyOutcome:
    strategy: str
    error_frobenius: float
    sketch_matrix_count: int
    sketch_matrix_bytes: int
    sketch_data_bytes: int
    imag_frobenius: float | None = None  # set when only the real part was compared


@dataclass
class DataComparisonReport:
    path: str
    shape: tuple
    r: int
    eps1: float
    eps2: float
    master_seed: int
    input_is_real: bool
    outcomes: list = field(default_factory=list)

    def outcome(self, strategy):
        for item in self.outcomes:
            if item.strategy == strategy:
                return item
        raise KeyError(strategy)

    def as_dict(self):
        return {
            "path": self.path,
            "shape": list(self.shape),
            "r": self.r,
            "eps1": self.eps1,
            "eps2": self.eps2,
            "master_seed": self.master_seed,
            "input_is_real": self.input_is_real,
            "real_part_taken": self.input_is_real,
            "outcomes": [item.__dict__ for item in self.outcomes],
        }


def _noise_tensor(rows, cols, n3, eps, seed, mode):
    if eps == 0:
        return Tensor3.zeros(rows, cols, n3)
    draw = sample_gaussian(rows, cols * n3, seed, mode).reshape(rows, cols, n3)
    return scale_to_frobenius(Tensor3(draw), eps)


def _slice_sketches(x0, s_list, s_tilde_list, z, z_tilde):
    y = [s_list[k] @ x0.frontal(k) + z.frontal(k) for k in range(x0.n3)]
    y_tilde = [s_tilde_list[k] @ x0.frontal(k).conj().T + z_tilde.frontal(k) for k in range(x0.n3)]
    return Tensor3.from_slices(y), Tensor3.from_slices(y_tilde)


def compare_strategies(x0, r, eps1, eps2, seed, noise_mode="real", real_target=False):
    """Recovery error and sketch storage of every strategy on the (unit-norm) tensor x0."""
    n1, n2, n3 = x0.shape
    if r < 1:
        raise DomainError(f"sketch size r must be >= 1, got {r}")
    z = _noise_tensor(r, n2, n3, eps1, seed.child(ROLE_Z), noise_mode)
    z_tilde = _noise_tensor(r, n1, n3, eps2, seed.child(ROLE_Z_TILDE), noise_mode)
    s = sample_complex_gaussian(r, n1, seed.child(ROLE_S))
    s_tilde = sample_complex_gaussian(r, n2, seed.child(ROLE_S_TILDE))

    def outcome(name, x, count):
        imag = None
        if real_target:
            imag = frobenius(x.data.imag)
            x = x.real
        return StrategyOutcome(
            name,
            tensor_frobenius(x - x0),
            count,
            count * r * (n1 + n2) * _COMPLEX_BYTES,
            r * (n1 + n2) * n3 * _COMPLEX_BYTES,
            imag,
        )

    pair = make_tensor_sketches(TensorSketchModel(x0, s, s_tilde, z, z_tilde))
    results = [outcome("tensor", recover_tensor(pair.y, pair.y_tilde, s), 1)]

    fresh_s = [sample_complex_gaussian(r, n1, seed.child(ROLE_S, k)) for k in range(n3)]
    fresh_s_tilde = [sample_complex_gaussian(r, n2, seed.child(ROLE_S_TILDE, k)) for k in range(n3)]
    y, y_tilde = _slice_sketches(x0, fresh_s, fresh_s_tilde, z, z_tilde)
    results.append(outcome("slicewise-fresh", recover_slicewise(y, y_tilde, fresh_s), n3))

    y, y_tilde = _slice_sketches(x0, [s] * n3, [s_tilde] * n3, z, z_tilde)
    results.append(outcome("slicewise-shared", recover_slicewise(y, y_tilde, s), 1))

    for item in results:
        logger.info(
            "%-16s error %.4f, %d sketch matrices (%d bytes)",
            item.strategy,
            item.error_frobenius,
            item.sketch_matrix_count,
            item.sketch_matrix_bytes,
        )
    return results


def run_data_tensor_comparison(path, r, eps1, eps2, seed, noise_mode="real"):
    """
    Load a TNS1 tensor, normalise it to unit Frobenius norm and compare the
    three recovery strategies. Real input files are compared on the real part
    of each recovered tensor.
    """
    tensor, is_real = load_tensor_file_with_kind(path)
    if tensor_frobenius(tensor) == 0:
        raise DomainError(f"{path} holds an all-zero tensor")
    x0 = scale_to_frobenius(tensor, 1.0)
    report = DataComparisonReport(str(path), x0.shape, r, eps1, eps2, seed.master, is_real)
    report.outcomes = compare_strategies(x0, r, eps1, eps2, seed, noise_mode, real_target=is_real)
    return report
