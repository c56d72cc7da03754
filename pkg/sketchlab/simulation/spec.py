from dataclasses import asdict, dataclass, field

import numpy as np

from sketchlab.constants import (
    DEFAULT_APPROX_DECAY,
    DEFAULT_FIELD_MODE,
    DEFAULT_N,
    DEFAULT_NOISE_GRID,
    DEFAULT_NOISE_MODE,
    DEFAULT_R0,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    FIELD_MODES,
    NOISE_MODES,
)
from sketchlab.errors import SpecValidationError

EXPERIMENT_KINDS = ("matrix", "tensor", "lemma-validation", "bound-eval", "data-tensor", "approx")


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Declarative experiment grid.

    One cell per (r, eps1, eps2); eps1 = ||Z||_F and eps2 = ||Z~||_F are the
    exact Frobenius norms the noise is rescaled to. n3_list drives the
    tube-length sweep of tensor experiments (empty = no sweep).
    """

    kind: str = "matrix"
    n1: int = DEFAULT_N
    n2: int = DEFAULT_N
    n3: int = 1
    r0: int = DEFAULT_R0
    r_list: tuple = (DEFAULT_R0 + 1, 2 * DEFAULT_R0, DEFAULT_N - 1)
    eps1_grid: tuple = DEFAULT_NOISE_GRID
    eps2_grid: tuple = DEFAULT_NOISE_GRID
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    noise_mode: str = DEFAULT_NOISE_MODE
    field_mode: str = DEFAULT_FIELD_MODE
    n3_list: tuple = ()
    decay: float = DEFAULT_APPROX_DECAY
    workers: int = DEFAULT_WORKERS
    output: str | None = None

    def violations(self):
        problems = []
        if self.kind not in EXPERIMENT_KINDS:
            problems.append(f"kind must be one of {EXPERIMENT_KINDS}, got {self.kind!r}")
        for name in ("n1", "n2", "n3"):
            if getattr(self, name) < 1:
                problems.append(f"{name} must be >= 1")
        if not 0 <= self.r0 <= min(self.n1, self.n2):
            problems.append(f"r0 must lie in [0, min(n1, n2)], got {self.r0}")
        if self.trials < 1:
            problems.append("trials must be >= 1")
        if not self.r_list:
            problems.append("r_list must be nonempty")
        elif min(self.r_list) < 1:
            problems.append("r_list entries must be >= 1")
        for name in ("eps1_grid", "eps2_grid"):
            grid = getattr(self, name)
            if not grid:
                problems.append(f"{name} must be nonempty")
            elif min(grid) < 0:
                problems.append(f"{name} entries must be >= 0")
        if any(n3 < 1 for n3 in self.n3_list):
            problems.append("n3_list entries must be >= 1")
        if self.noise_mode not in NOISE_MODES:
            problems.append(f"noise_mode must be one of {NOISE_MODES}")
        if self.field_mode not in FIELD_MODES:
            problems.append(f"field_mode must be one of {FIELD_MODES}")
        if not 0 <= self.master_seed < 2**64:
            problems.append("master_seed must be a 64-bit unsigned integer")
        if not 0 < self.decay < 1:
            problems.append("decay must lie in (0, 1)")
        if self.workers < 1:
            problems.append("workers must be >= 1")
        return problems

    def validate(self):
        problems = self.violations()
        if problems:
            raise SpecValidationError(problems)
        return self

    @property
    def real_target(self):
        return self.field_mode == "real-target"

    def cells(self):
        """(cell_index, r, eps1, eps2) in a fixed enumeration order."""
        index = 0
        for r in self.r_list:
            for eps1 in self.eps1_grid:
                for eps2 in self.eps2_grid:
                    yield index, r, eps1, eps2
                    index += 1

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TrialRecord:
    kind: str
    cell_index: int
    n1: int
    n2: int
    n3: int
    r0: int
    r: int
    eps1: float
    eps2: float
    noise_mode: str
    trial_index: int
    rel_err_frobenius: float
    abs_err_frobenius: float
    rank_flag: bool
    wall_time_ms: float
    extras: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class ResultRow:
    """One aggregated cell; field order is the CSV column order."""

    kind: str
    n1: int
    n2: int
    n3: int
    r0: int
    r: int
    eps1: float
    eps2: float
    trials: int
    noise_mode: str
    median_rel_err: float
    median_abs_err: float
    p25_rel_err: float
    p75_rel_err: float
    rank_flag_failures: int
    master_seed: int

    @classmethod
    def aggregate(cls, records, master_seed, kind=None):
        """Medians and quartiles over a fully collected list of one cell's trials."""
        first = records[0]
        rel = np.array([rec.rel_err_frobenius for rec in records])
        absolute = np.array([rec.abs_err_frobenius for rec in records])
        return cls(
            kind=kind or first.kind,
            n1=first.n1,
            n2=first.n2,
            n3=first.n3,
            r0=first.r0,
            r=first.r,
            eps1=first.eps1,
            eps2=first.eps2,
            trials=len(records),
            noise_mode=first.noise_mode,
            median_rel_err=float(np.median(rel)),
            median_abs_err=float(np.median(absolute)),
            p25_rel_err=float(np.percentile(rel, 25)),
            p75_rel_err=float(np.percentile(rel, 75)),
            rank_flag_failures=sum(1 for rec in records if not rec.rank_flag),
            master_seed=master_seed,
        )
