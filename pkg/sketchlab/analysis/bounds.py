"""
Closed-form error bounds for double-sketch recovery.

Every evaluator takes a BoundInput and returns a BoundOutput. Bounds are
evaluated exactly as stated, including which ones bound the squared
Frobenius error (the tensor bounds) and which bound the error itself. When
the hypotheses of a bound do not hold the evaluator does not raise: it
returns valid=False, value=nan and the reason.
"""

import logging
import math
from dataclasses import dataclass, field, replace

from sketchlab.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundInput:
    n1: int
    n2: int
    r: int
    r_low: int
    delta1: float
    delta2: float
    epsilon: float
    z_norm: float = 0.0
    z_tilde_norm: float = 0.0
    sigma_tail: float = 0.0
    n3: int = 1
    flags: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gap = math.sqrt(self.r) - math.sqrt(self.r_low)
        flags = {
            "rank_order": self.r_low < self.r < self.n1,
            "delta2_above_threshold": self.delta2 > math.exp(-(gap**2)),
            "delta2_below_one": self.delta2 < 1,
            "delta1_positive": self.delta1 > 0,
            "epsilon_in_range": 0 < self.epsilon < 1,
            "norms_nonnegative": min(self.z_norm, self.z_tilde_norm, self.sigma_tail) >= 0,
        }
        object.__setattr__(self, "flags", flags)

    @property
    def gap(self):
        """sqrt(r) - sqrt(r_low) - sqrt(log(1/delta2)); positive exactly when delta2 clears its threshold."""
        return math.sqrt(self.r) - math.sqrt(self.r_low) - math.sqrt(_log_inv(self.delta2))


@dataclass(frozen=True)
class BoundOutput:
    value: float
    probability_floor: float
    valid: bool
    terms: dict = field(default_factory=dict)
    reason: str | None = None
    notes: dict = field(default_factory=dict)


def _log_inv(x):
    return math.log(1.0 / x) if x > 0 else math.inf


def _failed(checks, inp):
    return [name for name in checks if not inp.flags[name]]


def _result(terms, floor, name, notes=None):
    if floor <= 0:
        logger.warning("%s: probability floor %.3g is vacuous", name, floor)
    return BoundOutput(sum(terms.values()), floor, True, terms, None, notes or {})


def _invalid(reasons, floor, notes=None):
    return BoundOutput(math.nan, floor, False, {}, "hypotheses violated: " + ", ".join(reasons), notes or {})


_ROBUST_CHECKS = (
    "rank_order",
    "delta2_above_threshold",
    "delta2_below_one",
    "delta1_positive",
    "epsilon_in_range",
    "norms_nonnegative",
)
# the approximation bounds allow delta2 = 1
_APPROX_CHECKS = tuple(c for c in _ROBUST_CHECKS if c != "delta2_below_one")


def _noise_terms(inp):
    z_tilde_term = math.sqrt(inp.r * (inp.n1 - inp.r)) * inp.z_tilde_norm / (math.sqrt(inp.delta1) * inp.gap)
    z_term = math.sqrt(inp.r) * inp.z_norm / math.sqrt(_log_inv(1 - inp.epsilon))
    return z_tilde_term, z_term


def robust_bound(inp):
    floor = 1 - inp.delta1 - inp.delta2 - inp.epsilon
    failed = _failed(_ROBUST_CHECKS, inp)
    if failed:
        return _invalid(failed, floor)
    z_tilde_term, z_term = _noise_terms(inp)
    return _result({"z_tilde": z_tilde_term, "z": z_term}, floor, "robust_bound")


def robust_bound_r_equals_r0(inp):
    floor = 1 - inp.delta1 - inp.delta2 - inp.epsilon
    failed = _failed(("delta1_positive", "epsilon_in_range", "norms_nonnegative"), inp)
    if inp.r != inp.r_low or not inp.r < inp.n1:
        failed.append("r_equals_r0_below_n1")
    if not 0 < inp.delta2 < 1:
        failed.append("delta2_in_open_unit_interval")
    if failed:
        return _invalid(failed, floor)
    r = inp.r
    z_tilde_term = r * math.sqrt(inp.n1 - r) * inp.z_tilde_norm / math.sqrt(
        inp.delta1 * _log_inv(1 - inp.delta2)
    )
    z_term = math.sqrt(r) * inp.z_norm / math.sqrt(_log_inv(1 - inp.epsilon))
    return _result({"z_tilde": z_tilde_term, "z": z_term}, floor, "robust_bound_r_equals_r0")


def robust_bound_r_equals_n1(inp):
    """With r = n1 the sketching matrix is invertible and Z~ drops out entirely."""
    floor = 1 - inp.epsilon
    failed = _failed(("epsilon_in_range",), inp)
    if inp.r != inp.n1:
        failed.append("r_equals_n1")
    if inp.z_norm < 0:
        failed.append("norms_nonnegative")
    if failed:
        return _invalid(failed, floor)
    z_term = math.sqrt(inp.n1) * inp.z_norm / math.sqrt(_log_inv(1 - inp.epsilon))
    return _result({"z": z_term}, floor, "robust_bound_r_equals_n1")


def _tail_factors(inp):
    log_d2 = math.sqrt(_log_inv(inp.delta2))
    first = (
        math.sqrt(inp.r * (inp.n1 - inp.r))
        * (math.sqrt(inp.r) + math.sqrt(inp.n2) + log_d2)
        / (math.sqrt(inp.delta1) * inp.gap)
    )
    second = (
        math.sqrt(inp.r)
        * (math.sqrt(inp.r) + math.sqrt(inp.n1) + log_d2)
        / math.sqrt(_log_inv(1 - inp.epsilon))
    )
    return first, second


def lowrank_approx_bound(inp):
    """
    Spectral-norm error bound for an approximately low-rank X0.

    r_low plays the role of r1 and sigma_tail is sigma_{r1+1}(X0).
    """
    floor = 1 - inp.delta1 - 3 * inp.delta2 - inp.epsilon
    failed = _failed(_APPROX_CHECKS, inp)
    if inp.delta2 > 1:
        failed.append("delta2_at_most_one")
    if failed:
        return _invalid(failed, floor)
    first, second = _tail_factors(inp)
    z_tilde_term, z_term = _noise_terms(inp)
    terms = {
        "tail": inp.sigma_tail * (first + second + 1),
        "z_tilde": z_tilde_term,
        "z": z_term,
    }
    return _result(terms, floor, "lowrank_approx_bound")


def tensor_robust_bound(inp):
    """Bound on the SQUARED Frobenius error of tensor recovery."""
    floor = 1 - (inp.delta1 + inp.delta2 + inp.epsilon) * inp.n3
    failed = _failed(_ROBUST_CHECKS, inp)
    if failed:
        return _invalid(failed, floor)
    z_tilde_term = 2 * inp.r * (inp.n1 - inp.r) * inp.z_tilde_norm**2 / (inp.delta1 * inp.gap**2)
    z_term = 2 * inp.r * inp.z_norm**2 / _log_inv(1 - inp.epsilon)
    return _result({"z_tilde": z_tilde_term, "z": z_term}, floor, "tensor_robust_bound")


def tensor_approx_bound(inp):
    """
    Squared-Frobenius bound for approximately low-tubal-rank tensors.

    sigma_tail is ||E||_F, the error of the best tubal-rank-r1 approximation.
    The probability floor is reported as stated, 1 - (d1 - d2 - eps) n3 - 2 d2;
    notes carry the sign-consistent variant 1 - (d1 + d2 + eps) n3 - 2 d2.
    """
    floor = 1 - (inp.delta1 - inp.delta2 - inp.epsilon) * inp.n3 - 2 * inp.delta2
    notes = {
        "probability_floor_consistent": 1 - (inp.delta1 + inp.delta2 + inp.epsilon) * inp.n3 - 2 * inp.delta2,
        "probability_floor_discrepancy": True,
    }
    failed = _failed(_APPROX_CHECKS, inp)
    if inp.delta2 > 1:
        failed.append("delta2_at_most_one")
    if failed:
        return _invalid(failed, floor, notes)
    first, second = _tail_factors(inp)
    terms = {
        "tail": 2 * inp.sigma_tail**2 * (4 * first + 4 * second + 1) ** 2,
        "z_tilde": 8 * inp.r * (inp.n1 - inp.r) * inp.z_tilde_norm**2 / (inp.delta1 * inp.gap**2),
        "z": 8 * inp.r * inp.z_norm**2 / _log_inv(1 - inp.epsilon),
    }
    return _result(terms, floor, "tensor_approx_bound", notes)


def best_lowrank_r1(inp, tails):
    """
    Choose r1 minimising lowrank_approx_bound.

    `tails` maps each candidate r1 to sigma_{r1+1}(X0). Candidates whose
    hypotheses fail are skipped.
    """
    best = None
    for r1, tail in sorted(tails.items()):
        out = lowrank_approx_bound(replace(inp, r_low=r1, sigma_tail=tail))
        if out.valid and (best is None or out.value < best[1].value):
            best = (r1, out)
    if best is None:
        raise DomainError("no candidate r1 satisfies the approximation bound hypotheses")
    return best


BOUND_VARIANTS = {
    "robust": robust_bound,
    "r-equals-r0": robust_bound_r_equals_r0,
    "r-equals-n1": robust_bound_r_equals_n1,
    "lowrank-approx": lowrank_approx_bound,
    "tensor-robust": tensor_robust_bound,
    "tensor-approx": tensor_approx_bound,
}
