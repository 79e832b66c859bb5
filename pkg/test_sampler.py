"""
Monte Carlo 결합 측정 샘플러 테스트
"""

import math

import numpy as np
import pytest

from nopa_bell_simulation.core.exceptions import ConsistencyError, InvalidParameterError, TruncationError
from nopa_bell_simulation.core.fock_space import TruncatedFockSpace
from nopa_bell_simulation.analysis.bell import AngleSet, BellKind, nopa_bell
from nopa_bell_simulation.analysis.correlations import CorrelationQuery, analytic_correlation
from nopa_bell_simulation.operators.number_bits import NumberBasis
from nopa_bell_simulation.sampling.sampler import (
    MeasurementPlan,
    NumberSetting,
    SampleBatch,
    SpinSetting,
    convergence_slope,
    estimate_bell,
    number_outcome_table,
    sample_joint_number,
    sample_joint_spin,
    sequential_outcome_distribution,
    spin_outcome_table,
)

SPACE = TruncatedFockSpace(16)
GAMMA_STAR = math.atan(math.tanh(2.0))


def spin_plan(alpha=0.0, beta=0.5, r=1.0, shots=100_000, seed=7, d=1):
    return MeasurementPlan(SpinSetting(alpha, d), SpinSetting(beta, d), r, SPACE, shots, seed)


def number_plan(alpha=0.3, beta=-0.3, bits=2, r=1.0, shots=100_000, seed=7):
    return MeasurementPlan(
        NumberSetting(NumberBasis.theta(alpha), bits),
        NumberSetting(NumberBasis.theta(beta), bits),
        r, SPACE, shots, seed,
    )


def test_spin_table_matches_correlation():
    outcomes, probabilities = spin_outcome_table(spin_plan(0.2, 1.1))
    assert probabilities.sum() == pytest.approx(1.0, abs=1e-12)
    E = float(np.dot(outcomes[:, 0] * outcomes[:, 1], probabilities))
    assert E == pytest.approx(analytic_correlation(CorrelationQuery(0.2, 1.1, 1, 1.0)), abs=1e-12)


def test_sample_counts_sum_to_shots():
    batch = sample_joint_spin(spin_plan(shots=250_001))
    assert int(batch.counts.sum()) == 250_001
    assert sum(batch.histogram.values()) == 250_001


def test_sampling_is_reproducible_across_threads():
    """결과는 시드로만 결정 (스레드 수 무관)"""
    plan = spin_plan(shots=350_000)
    a = sample_joint_spin(plan, threads=1)
    b = sample_joint_spin(plan, threads=4)
    np.testing.assert_array_equal(a.counts, b.counts)
    c = sample_joint_spin(spin_plan(shots=350_000, seed=8), threads=1)
    assert not np.array_equal(a.counts, c.counts)


def test_spin_correlation_estimate():
    plan = spin_plan(0.0, GAMMA_STAR, shots=400_000)
    batch = sample_joint_spin(plan)
    exact = analytic_correlation(CorrelationQuery(0.0, GAMMA_STAR, 1, 1.0))
    assert abs(batch.correlation() - exact) < 5 * batch.correlation_error()


def test_plan_validation():
    with pytest.raises(InvalidParameterError):
        MeasurementPlan(SpinSetting(0.0), NumberSetting('z', 1), 1.0, SPACE, 10, 0)
    with pytest.raises(InvalidParameterError):
        spin_plan(shots=0)
    with pytest.raises(InvalidParameterError):
        spin_plan(seed=-1)
    with pytest.raises(TruncationError):
        spin_plan(d=3)


def test_number_table_is_complete():
    outcomes, probabilities = number_outcome_table(number_plan())
    assert outcomes.shape == (16, 2)
    assert probabilities.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.all(probabilities >= 0)


def test_z_basis_outcomes_are_perfectly_correlated():
    """z 기저에서 N = N' (NOPA 광자 수 상관)"""
    plan = number_plan(0.0, 0.0, bits=3)
    outcomes, probabilities = number_outcome_table(plan)
    off_diagonal = probabilities[outcomes[:, 0] != outcomes[:, 1]]
    assert np.all(off_diagonal == 0.0)


def test_sequential_collapse_matches_table():
    plan = number_plan(0.4, 1.2, bits=3)
    outcomes, probabilities = number_outcome_table(plan)
    sequential = sequential_outcome_distribution(plan)
    for (a, b), p in zip(outcomes, probabilities):
        assert sequential.get((int(a), int(b)), 0.0) == pytest.approx(p, abs=1e-12)


def test_number_sampling_xor_statistics():
    plan = number_plan(0.0, 0.9, bits=2, shots=200_000)
    batch = sample_joint_number(plan)
    outcomes, probabilities = number_outcome_table(plan)
    xor = np.bitwise_xor(outcomes[:, 0], outcomes[:, 1])
    expected = float(np.dot(xor, probabilities))
    mean, error = batch.weighted_xor_mean([1, 2])
    assert mean == pytest.approx(batch.number_xor_mean(), abs=1e-12)
    assert abs(mean - expected) < 5 * error
    assert 0.0 <= batch.hamming_mean() <= 2.0


def test_sample_batch_rejects_bad_counts():
    with pytest.raises(ConsistencyError):
        SampleBatch(outcomes=[(1, 1), (1, -1)], counts=[3, 3], shots=5, seed=0)


def test_estimate_chsh_violation():
    angles = AngleSet.nopa_convention(GAMMA_STAR)
    report = estimate_bell(BellKind.CHSH, angles, 1.0, SPACE, 200_000, seed=11)
    assert report.analytic_lhs == pytest.approx(2 * math.sqrt(1 + math.tanh(2.0) ** 2), abs=1e-12)
    assert abs(report.lhs_value - report.analytic_lhs) < 5 * report.standard_error
    assert report.z_score > 10
    assert report.shots == 200_000

    again = estimate_bell(BellKind.CHSH, angles, 1.0, SPACE, 200_000, seed=11, threads=3)
    assert again.lhs_value == report.lhs_value


def test_estimate_number_xor_violation():
    gamma = nopa_bell(BellKind.NUMBER_XOR, 0.0, 1.0, order=2).optimal_gamma
    report = estimate_bell(BellKind.NUMBER_XOR, AngleSet.nopa_convention(gamma), 1.0, SPACE,
                           100_000, seed=3, order=2)
    assert report.classical_bound == 3.0
    assert report.analytic_lhs == pytest.approx(4.03614, abs=1e-5)
    assert abs(report.lhs_value - report.analytic_lhs) < 6 * report.standard_error
    assert report.violation > 0


def test_estimate_warnings():
    angles = AngleSet.nopa_convention(0.5)
    report = estimate_bell(BellKind.CHSH, angles, 1.0, SPACE, 50, seed=0, target_precision=1e-6)
    assert len(report.warnings) == 2


def test_convergence_slope():
    """RMS 오차 ∝ shots^{-1/2}"""
    fit = convergence_slope(1.0, 0.0, math.pi / 4, SPACE, repeats=32, seed=5)
    assert fit.within(-0.5, 0.1), fit.slope


@pytest.mark.parametrize("r", [0.0, 0.4, 2.0])
def test_aligned_z_spins_are_perfectly_correlated(r):
    batch = sample_joint_spin(spin_plan(0.0, 0.0, r=r, shots=20_000, seed=13))
    assert set(batch.histogram) <= {(1, 1), (-1, -1)}
    assert batch.correlation() == 1.0


def test_vacuum_x_spins_are_uniform():
    """r = 0, α = β = π/2: p(a, b) = 1/4"""
    plan = spin_plan(math.pi / 2, math.pi / 2, r=0.0, shots=200_000, seed=21)
    _, probabilities = spin_outcome_table(plan)
    np.testing.assert_allclose(probabilities, 0.25, atol=1e-12)
    batch = sample_joint_spin(plan)
    sigma = math.sqrt(0.25 * 0.75 / plan.shots)
    for count in batch.counts:
        assert abs(count / plan.shots - 0.25) < 5 * sigma


@pytest.mark.parametrize("kind,order", [
    (BellKind.CHSH, 1),
    (BellKind.BIT_XOR, 0),
    (BellKind.NUMBER_XOR, 2),
])
def test_no_violation_without_squeezing(kind, order):
    report = estimate_bell(kind, AngleSet.nopa_convention(0.2), 0.0, SPACE, 20_000, seed=17, order=order)
    assert report.analytic_lhs <= report.classical_bound + 1e-12
    assert report.violation <= 3 * report.standard_error
