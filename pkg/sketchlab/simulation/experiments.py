"""
Monte Carlo experiment runners.

The target X0 is drawn once per (n1, n2, r0) from its own seed stream and
normalised to unit Frobenius norm; every trial then draws fresh S, S~, Z and
Z~ from streams keyed by (r, trial index, role). All noise levels of one r
therefore see the same sketches and noise directions, and only the noise
scale moves across the grid. Trials of all cells go through one ordered
worker pool and are aggregated only after every trial has finished, so the
results table is the same for any worker count.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from sketchlab.analysis.bounds import (
    BoundInput,
    BoundOutput,
    lowrank_approx_bound,
    robust_bound,
    tensor_robust_bound,
)
from sketchlab.constants import (
    DEFAULT_DELTA,
    DEFAULT_N3_SWEEP_NOISE,
    ROLE_S,
    ROLE_S_TILDE,
    ROLE_X0,
    ROLE_Z,
    ROLE_Z_TILDE,
    SIGMA_MULTIPLIER,
)
from sketchlab.core.linalg import frobenius, sigma_k
from sketchlab.core.parallel import ordered_map
from sketchlab.core.sampling import Seed, derive_stream, sample_complex_gaussian, sample_gaussian
from sketchlab.errors import DomainError
from sketchlab.recovery.matrix_sketch import SketchModel, make_sketches, recover, recovery_error
from sketchlab.recovery.tensor_sketch import (
    TensorSketchModel,
    make_tensor_sketches,
    recover_tensor_with_flags,
)
from sketchlab.simulation.generators import (
    gen_approx_lowrank_matrix,
    gen_lowrank_matrix,
    gen_lowtubal_tensor,
    scale_to_frobenius,
)
from sketchlab.simulation.run_state import RunState
from sketchlab.simulation.spec import ResultRow, TrialRecord
from sketchlab.tensors.tensor3 import Tensor3
from sketchlab.tensors.tproduct import tensor_frobenius

logger = logging.getLogger(__name__)


class Cell(NamedTuple):
    seed_key: tuple  # hashed into every trial seed; shared by all noise levels of one r
    index: int
    kind: str
    n3: int
    r: int
    eps1: float
    eps2: float


@dataclass
class ExperimentResult:
    spec: object
    rows: list
    records: list
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BoundValidation:
    kind: str
    bound: BoundOutput
    trials: int
    frequency: float
    required: float
    passed: bool
    errors: tuple


def trial_seed(master, cell_key, trial_index, role):
    return Seed(master, derive_stream(*cell_key, trial_index, role))


def target_seed(spec):
    return Seed(spec.master_seed, derive_stream(ROLE_X0, spec.n1, spec.n2, spec.r0))


def _field(spec):
    return "real" if spec.real_target else "complex"


def _unit(m):
    norm = tensor_frobenius(m) if isinstance(m, Tensor3) else frobenius(m)
    return m if norm == 0 else scale_to_frobenius(m, 1.0)


def matrix_target(spec):
    return _unit(gen_lowrank_matrix(spec.n1, spec.n2, spec.r0, target_seed(spec), _field(spec)))


def tensor_target(spec, n3):
    return _unit(gen_lowtubal_tensor(spec.n1, spec.n2, n3, spec.r0, target_seed(spec), _field(spec)))


def _noise(rows, cols, eps, seed, mode):
    if eps == 0:
        return np.zeros((rows, cols), dtype=np.complex128)
    return scale_to_frobenius(sample_gaussian(rows, cols, seed, mode), eps)


def _warn_rank(cell, trial_index, flag):
    if not flag and cell.eps2 > 0:
        logger.warning(
            "cell %d trial %d: noisy y_tilde is rank-deficient (r=%d, eps2=%g)",
            cell.index,
            trial_index,
            cell.r,
            cell.eps2,
        )


def _record(spec, cell, trial_index, abs_err, x0_norm, flag, started, extras=None):
    rel_err = abs_err / x0_norm if x0_norm > 0 else abs_err
    elapsed = (time.perf_counter() - started) * 1000.0
    logger.debug("cell %d trial %d: rel err %.3e (%.1f ms)", cell.index, trial_index, rel_err, elapsed)
    return TrialRecord(
        kind=cell.kind,
        cell_index=cell.index,
        n1=spec.n1,
        n2=spec.n2,
        n3=cell.n3,
        r0=spec.r0,
        r=cell.r,
        eps1=cell.eps1,
        eps2=cell.eps2,
        noise_mode=spec.noise_mode,
        trial_index=trial_index,
        rel_err_frobenius=rel_err,
        abs_err_frobenius=abs_err,
        rank_flag=flag,
        wall_time_ms=elapsed,
        extras=extras or {},
    )


def matrix_trial(spec, x0, cell, trial_index, spectral=False):
    """One double-sketch recovery of the matrix x0 with freshly drawn sketches and noise."""
    started = time.perf_counter()
    n1, n2 = x0.shape

    def seed(role):
        return trial_seed(spec.master_seed, cell.seed_key, trial_index, role)

    model = SketchModel(
        x0,
        sample_complex_gaussian(cell.r, n1, seed(ROLE_S)),
        sample_complex_gaussian(cell.r, n2, seed(ROLE_S_TILDE)),
        _noise(cell.r, n2, cell.eps1, seed(ROLE_Z), spec.noise_mode),
        _noise(cell.r, n1, cell.eps2, seed(ROLE_Z_TILDE), spec.noise_mode),
    )
    pair = make_sketches(model)
    result = recover(pair.y, pair.y_tilde, model.s)
    x = result.x
    _warn_rank(cell, trial_index, result.y_tilde_full_rank)
    extras = {"method": result.method, "y_tilde_rank": result.y_tilde_rank}
    if spec.real_target:
        extras["imag_frobenius"] = frobenius(x.imag)
        x = x.real
    if spectral:
        extras["spectral_err"] = recovery_error(x, x0, "spectral")
    return _record(
        spec,
        cell,
        trial_index,
        recovery_error(x, x0),
        frobenius(x0),
        result.y_tilde_full_rank,
        started,
        extras,
    )


def tensor_trial(spec, x0, cell, trial_index):
    """One tensor double-sketch recovery; noise tensors are rescaled as a whole."""
    started = time.perf_counter()
    n1, n2, n3 = x0.shape

    def seed(role):
        return trial_seed(spec.master_seed, cell.seed_key, trial_index, role)

    z = _noise(cell.r, n2 * n3, cell.eps1, seed(ROLE_Z), spec.noise_mode)
    z_tilde = _noise(cell.r, n1 * n3, cell.eps2, seed(ROLE_Z_TILDE), spec.noise_mode)
    model = TensorSketchModel(
        x0,
        sample_complex_gaussian(cell.r, n1, seed(ROLE_S)),
        sample_complex_gaussian(cell.r, n2, seed(ROLE_S_TILDE)),
        Tensor3(z.reshape(cell.r, n2, n3)),
        Tensor3(z_tilde.reshape(cell.r, n1, n3)),
    )
    pair = make_tensor_sketches(model)
    result = recover_tensor_with_flags(pair.y, pair.y_tilde, model.s)
    x = result.x
    _warn_rank(cell, trial_index, result.y_tilde_full_rank)
    extras = {"methods": result.methods}
    if spec.real_target:
        extras["imag_frobenius"] = frobenius(x.data.imag)
        x = x.real
    return _record(
        spec,
        cell,
        trial_index,
        tensor_frobenius(x - x0),
        tensor_frobenius(x0),
        result.y_tilde_full_rank,
        started,
        extras,
    )


def run_cells(spec, cells, trial_fn):
    """Run spec.trials trials of every cell and aggregate one ResultRow per cell."""
    state = RunState()
    state.start(cell.index for cell in cells)
    jobs = [(cell, t) for cell in cells for t in range(spec.trials)]
    records = ordered_map(lambda job: trial_fn(*job), jobs, spec.workers)
    for (cell, _), rec in zip(jobs, records):
        state.record(cell.index, rec)

    rows = []
    for cell in cells:
        row = ResultRow.aggregate(state.cell_records(cell.index), spec.master_seed)
        logger.info(
            "cell %d %s r=%d n3=%d eps1=%g eps2=%g: median rel err %.3e",
            cell.index,
            cell.kind,
            cell.r,
            cell.n3,
            cell.eps1,
            cell.eps2,
            row.median_rel_err,
        )
        rows.append(row)
    state.finish()
    return rows, state.all_records()


def _grid_cells(spec, kind, n3=1):
    return [Cell((r,), index, kind, n3, r, eps1, eps2) for index, r, eps1, eps2 in spec.cells()]


def _metadata(spec, kind, records, **extra):
    """Run metadata; real-target runs also carry the median norm of the discarded imaginary parts."""
    meta = {
        "kind": kind,
        "field_mode": spec.field_mode,
        "real_part_taken": spec.real_target,
        "noise_mode": spec.noise_mode,
        "master_seed": spec.master_seed,
        "trials": spec.trials,
        "spec": spec.as_dict(),
        **extra,
    }
    if spec.real_target and records:
        meta["median_imag_frobenius"] = float(np.median([rec.extras["imag_frobenius"] for rec in records]))
    return meta


def run_matrix_experiment(spec):
    """
    Noise-grid sweep of matrix double-sketch recovery.

    One row per (r, eps1, eps2) cell with the median relative Frobenius error
    over spec.trials trials.
    """
    spec.validate()
    x0 = matrix_target(spec)
    cells = _grid_cells(spec, "matrix")
    rows, records = run_cells(spec, cells, lambda cell, t: matrix_trial(spec, x0, cell, t))
    return ExperimentResult(spec, rows, records, _metadata(spec, "matrix", records))


def run_tensor_experiment(spec):
    """
    Noise-grid sweep of tensor recovery at tube length spec.n3, followed by the
    tube-length sweep over spec.n3_list at fixed noise (one row per (r, n3),
    kind "tensor-n3-sweep").
    """
    spec.validate()
    cells = _grid_cells(spec, "tensor", spec.n3)
    for n3 in spec.n3_list:
        for r in spec.r_list:
            cells.append(
                Cell(
                    ("n3-sweep", n3, r),
                    len(cells),
                    "tensor-n3-sweep",
                    n3,
                    r,
                    DEFAULT_N3_SWEEP_NOISE,
                    DEFAULT_N3_SWEEP_NOISE,
                )
            )
    targets = {n3: tensor_target(spec, n3) for n3 in sorted({cell.n3 for cell in cells})}
    rows, records = run_cells(spec, cells, lambda cell, t: tensor_trial(spec, targets[cell.n3], cell, t))
    meta = _metadata(spec, "tensor", records, n3_sweep_noise=DEFAULT_N3_SWEEP_NOISE if spec.n3_list else None)
    return ExperimentResult(spec, rows, records, meta)


def run_approx_experiment(spec, delta1=DEFAULT_DELTA, delta2=DEFAULT_DELTA, epsilon=DEFAULT_DELTA):
    """
    Recovery of an approximately low-rank target (unit leading singular values,
    geometric tail from spec.decay) with spectral errors checked against the
    approximation bound at r1 = r0.
    """
    spec.validate()
    x0 = gen_approx_lowrank_matrix(
        spec.n1, spec.n2, spec.r0, spec.decay, target_seed(spec), _field(spec)
    )
    sigma_tail = sigma_k(x0, spec.r0 + 1)
    cells = _grid_cells(spec, "approx")
    rows, records = run_cells(
        spec, cells, lambda cell, t: matrix_trial(spec, x0, cell, t, spectral=True)
    )

    bounds = []
    for cell in cells:
        out = lowrank_approx_bound(
            BoundInput(
                spec.n1,
                spec.n2,
                cell.r,
                spec.r0,
                delta1,
                delta2,
                epsilon,
                z_norm=cell.eps1,
                z_tilde_norm=cell.eps2,
                sigma_tail=sigma_tail,
            )
        )
        spectral = [rec.extras["spectral_err"] for rec in records if rec.cell_index == cell.index]
        within = float(np.mean([err <= out.value for err in spectral])) if out.valid else None
        bounds.append(
            {
                "cell": cell.index,
                "r": cell.r,
                "eps1": cell.eps1,
                "eps2": cell.eps2,
                "bound": out.value if out.valid else None,
                "valid": out.valid,
                "reason": out.reason,
                "probability_floor": out.probability_floor,
                "median_spectral_err": float(np.median(spectral)),
                "frequency_within_bound": within,
            }
        )
    meta = _metadata(spec, "approx", records, sigma_tail=sigma_tail, bounds=bounds)
    return ExperimentResult(spec, rows, records, meta)


def run_bound_validation(spec, delta1=DEFAULT_DELTA, delta2=DEFAULT_DELTA, epsilon=DEFAULT_DELTA, slack=None):
    """
    Empirical frequency with which the recovery error of the first grid cell
    stays below its bound.

    Matrix specs compare ||X - X0||_F with robust_bound; tensor specs compare
    ||X - X0||_F^2 with tensor_robust_bound. The check passes when the
    frequency reaches the probability floor minus `slack` (default: the
    3-sigma binomial half-width at the floor).
    """
    spec.validate()
    if spec.kind not in ("matrix", "tensor"):
        raise DomainError(f"bound validation needs a matrix or tensor spec, got {spec.kind!r}")
    _, r, eps1, eps2 = next(spec.cells())
    inp = BoundInput(
        spec.n1,
        spec.n2,
        r,
        spec.r0,
        delta1,
        delta2,
        epsilon,
        z_norm=eps1,
        z_tilde_norm=eps2,
        n3=spec.n3 if spec.kind == "tensor" else 1,
    )
    if spec.kind == "matrix":
        bound = robust_bound(inp)
        x0 = matrix_target(spec)
        cell = Cell((r,), 0, "matrix", 1, r, eps1, eps2)
        _, records = run_cells(spec, [cell], lambda c, t: matrix_trial(spec, x0, c, t))
        errors = tuple(rec.abs_err_frobenius for rec in records)
    else:
        bound = tensor_robust_bound(inp)
        x0 = tensor_target(spec, spec.n3)
        cell = Cell((r,), 0, "tensor", spec.n3, r, eps1, eps2)
        _, records = run_cells(spec, [cell], lambda c, t: tensor_trial(spec, x0, c, t))
        errors = tuple(rec.abs_err_frobenius**2 for rec in records)

    floor = bound.probability_floor
    if slack is None:
        p = min(max(floor, 0.0), 1.0)
        slack = SIGMA_MULTIPLIER * math.sqrt(p * (1 - p) / spec.trials)
    required = floor - slack
    if not bound.valid:
        logger.warning("bound not applicable: %s", bound.reason)
        return BoundValidation(spec.kind, bound, spec.trials, math.nan, required, False, errors)
    frequency = float(np.mean([err <= bound.value for err in errors]))
    passed = frequency >= required
    logger.info(
        "%s bound %.4g: frequency %.4f vs required %.4f -> %s",
        spec.kind,
        bound.value,
        frequency,
        required,
        "pass" if passed else "FAIL",
    )
    return BoundValidation(spec.kind, bound, spec.trials, frequency, required, passed, errors)
