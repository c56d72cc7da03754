import math
from dataclasses import replace

import pytest

from sketchlab.analysis.bounds import (
    BOUND_VARIANTS,
    BoundInput,
    best_lowrank_r1,
    lowrank_approx_bound,
    robust_bound,
    robust_bound_r_equals_n1,
    robust_bound_r_equals_r0,
    tensor_approx_bound,
    tensor_robust_bound,
)
from sketchlab.errors import DomainError


def robust_oracle(n1, r, r0, d1, d2, eps, z, zt):
    gap = math.sqrt(r) - math.sqrt(r0) - math.sqrt(math.log(1 / d2))
    return (
        math.sqrt(r * (n1 - r)) * zt / (math.sqrt(d1) * gap)
        + math.sqrt(r) * z / math.sqrt(math.log(1 / (1 - eps)))
    )


@pytest.fixture
def point():
    return BoundInput(100, 100, 40, 10, 0.05, 0.05, 0.05, z_norm=0.01, z_tilde_norm=0.01)


def test_robust_bound_matches_closed_form(point):
    out = robust_bound(point)
    assert out.valid and out.reason is None
    assert out.value == pytest.approx(robust_oracle(100, 40, 10, 0.05, 0.05, 0.05, 0.01, 0.01), rel=1e-12)
    assert out.value == pytest.approx(1.81, abs=0.01)
    assert out.probability_floor == pytest.approx(0.85)
    assert sum(out.terms.values()) == pytest.approx(out.value)


def test_zero_noise_gives_zero_bound(point):
    assert robust_bound(replace(point, z_norm=0.0, z_tilde_norm=0.0)).value == 0


@pytest.mark.parametrize(
    "overrides",
    [
        {"r": 20},  # delta2 below exp(-(sqrt(r) - sqrt(r0))^2)
        {"r": 20, "delta1": 0.1, "delta2": 0.1, "epsilon": 0.1},
        {"r": 10},
        {"r": 100},
        {"delta1": 0.0},
        {"epsilon": 1.0},
        {"delta2": 1.0},
        {"z_norm": -1.0},
    ],
)
def test_invalid_hypotheses_are_reported_not_raised(point, overrides):
    out = robust_bound(replace(point, **overrides))
    assert not out.valid
    assert math.isnan(out.value)
    assert out.reason.startswith("hypotheses violated")


def test_delta2_threshold_is_strict(point):
    threshold = math.exp(-((math.sqrt(40) - math.sqrt(10)) ** 2))
    at = replace(point, delta2=threshold)
    assert not at.flags["delta2_above_threshold"]
    assert not robust_bound(at).valid
    above = replace(point, delta2=threshold * 1.5)
    assert robust_bound(above).valid


def test_r_equals_r0_variant():
    inp = BoundInput(100, 100, 10, 10, 0.05, 0.05, 0.05, z_norm=0.01, z_tilde_norm=0.02)
    out = robust_bound_r_equals_r0(inp)
    expected = 10 * math.sqrt(90) * 0.02 / math.sqrt(0.05 * math.log(1 / 0.95)) + math.sqrt(10) * 0.01 / math.sqrt(
        math.log(1 / 0.95)
    )
    assert out.valid
    assert out.value == pytest.approx(expected, rel=1e-12)
    assert not robust_bound_r_equals_r0(replace(inp, r=11)).valid


def test_r_equals_n1_variant_ignores_z_tilde():
    inp = BoundInput(100, 100, 100, 10, 0.05, 0.05, 0.05, z_norm=0.01, z_tilde_norm=0.0)
    out = robust_bound_r_equals_n1(inp)
    assert out.valid
    assert out.value == pytest.approx(10 * 0.01 / math.sqrt(math.log(1 / 0.95)), rel=1e-12)
    assert out.probability_floor == pytest.approx(0.95)
    assert robust_bound_r_equals_n1(replace(inp, z_tilde_norm=5.0)).value == out.value
    assert not robust_bound_r_equals_n1(replace(inp, r=99)).valid


def test_lowrank_approx_bound_terms(point):
    inp = replace(point, sigma_tail=0.5)
    out = lowrank_approx_bound(inp)
    log_d2 = math.sqrt(math.log(20))
    gap = math.sqrt(40) - math.sqrt(10) - log_d2
    first = math.sqrt(40 * 60) * (math.sqrt(40) + 10 + log_d2) / (math.sqrt(0.05) * gap)
    second = math.sqrt(40) * (math.sqrt(40) + 10 + log_d2) / math.sqrt(math.log(1 / 0.95))
    assert out.terms["tail"] == pytest.approx(0.5 * (first + second + 1), rel=1e-12)
    assert out.value == pytest.approx(out.terms["tail"] + robust_bound(point).value, rel=1e-12)
    assert out.probability_floor == pytest.approx(1 - 0.05 - 0.15 - 0.05)


def test_lowrank_approx_reduces_to_robust_bound_without_tail(point):
    assert lowrank_approx_bound(point).value == pytest.approx(robust_bound(point).value, rel=1e-12)


def test_tensor_robust_bound():
    inp = BoundInput(50, 50, 30, 5, 0.02, 0.02, 0.02, z_norm=0.01, z_tilde_norm=0.01, n3=4)
    out = tensor_robust_bound(inp)
    gap = math.sqrt(30) - math.sqrt(5) - math.sqrt(math.log(50))
    assert gap == pytest.approx(1.263, abs=1e-3)
    expected = 2 * 30 * 20 * 1e-4 / (0.02 * gap**2) + 2 * 30 * 1e-4 / math.log(1 / 0.98)
    assert out.valid
    assert out.value == pytest.approx(expected, rel=1e-12)
    assert out.probability_floor == pytest.approx(0.76)
    assert not tensor_robust_bound(replace(inp, r=15)).valid


def test_tensor_approx_bound_reports_both_floors():
    inp = BoundInput(50, 50, 30, 5, 0.02, 0.02, 0.02, z_norm=0.01, z_tilde_norm=0.01, sigma_tail=0.1, n3=4)
    out = tensor_approx_bound(inp)
    assert out.valid
    assert out.probability_floor == pytest.approx(1 - (0.02 - 0.02 - 0.02) * 4 - 0.04)
    assert out.notes["probability_floor_consistent"] == pytest.approx(1 - 0.06 * 4 - 0.04)
    assert out.terms["z"] == pytest.approx(4 * tensor_robust_bound(inp).terms["z"], rel=1e-12)
    assert out.terms["tail"] > 0


def test_approximation_bounds_accept_delta2_of_one():
    inp = BoundInput(100, 100, 60, 10, 0.05, 1.0, 0.05, sigma_tail=0.1)
    assert lowrank_approx_bound(inp).valid
    assert not robust_bound(inp).valid


def test_best_r1_picks_the_smallest_valid_bound(point):
    tails = {2: 0.5, 5: 0.1, 10: 0.01, 39: 0.0}
    r1, out = best_lowrank_r1(point, tails)
    values = {
        k: lowrank_approx_bound(replace(point, r_low=k, sigma_tail=t))
        for k, t in tails.items()
    }
    assert r1 in tails and out.valid
    assert out.value == min(v.value for v in values.values() if v.valid)
    with pytest.raises(DomainError):
        best_lowrank_r1(point, {39: 0.0})


def test_registry_covers_every_variant(point):
    assert set(BOUND_VARIANTS) == {
        "robust",
        "r-equals-r0",
        "r-equals-n1",
        "lowrank-approx",
        "tensor-robust",
        "tensor-approx",
    }
    for evaluator in BOUND_VARIANTS.values():
        out = evaluator(point)
        assert out.valid == (not math.isnan(out.value))


def _nondecreasing(values):
    return all(b >= a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize(
    "name, grid",
    [
        ("z_norm", [0.0, 1e-3, 1e-2, 1e-1, 1.0]),
        ("z_tilde_norm", [0.0, 1e-3, 1e-2, 1e-1, 1.0]),
        ("n1", [50, 60, 80, 100, 200]),
    ],
)
def test_robust_bound_grows_with_noise_and_size(point, name, grid):
    values = []
    for value in grid:
        out = robust_bound(replace(point, **{name: value}))
        assert out.valid
        values.append(out.value)
    assert _nondecreasing(values)


def test_robust_bound_shrinks_as_delta1_grows(point):
    values = [robust_bound(replace(point, delta1=d1)).value for d1 in (0.01, 0.02, 0.05, 0.1, 0.2)]
    assert _nondecreasing(values[::-1])


def test_z_tilde_term_shrinks_as_the_rank_gap_widens(point):
    terms = [robust_bound(replace(point, r_low=r0)).terms["z_tilde"] for r0 in (10, 8, 5, 2, 1)]
    assert _nondecreasing(terms[::-1])
