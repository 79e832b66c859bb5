"""
국소 숨은 변수 기준 모델 테스트
"""

import math

import numpy as np
import pytest

from nopa_bell_simulation.analysis.bell import AngleSet
from nopa_bell_simulation.sampling.lhv_model import (
    LhvModel,
    angular_distance,
    lhv_estimate,
    lhv_exact_chsh,
    lhv_exact_correlation,
)

DEFAULT_ANGLES = AngleSet(0.0, math.pi / 2, math.pi / 4, -math.pi / 4)


def test_angular_distance_wraps():
    assert angular_distance(0.0, 3 * math.pi / 2) == pytest.approx(math.pi / 2)
    assert angular_distance(0.1, 0.1 + 4 * math.pi) == pytest.approx(0.0, abs=1e-12)
    assert angular_distance(-math.pi / 4, math.pi / 2) == pytest.approx(3 * math.pi / 4)


def test_exact_correlation_is_triangle_wave():
    assert lhv_exact_correlation(0.0, 0.0) == 1.0
    assert lhv_exact_correlation(0.0, math.pi) == pytest.approx(-1.0)
    assert lhv_exact_correlation(0.0, math.pi / 4) == pytest.approx(0.5)


def test_exact_chsh_saturates_bound():
    assert lhv_exact_chsh(DEFAULT_ANGLES).lhs_value == pytest.approx(2.0, abs=1e-12)


def test_exact_chsh_never_exceeds_two():
    rng = np.random.default_rng(0)
    for row in rng.uniform(0.0, 2 * math.pi, size=(500, 4)):
        assert lhv_exact_chsh(AngleSet(*row)).lhs_value <= 2.0 + 1e-12


def test_response_is_local_sign():
    model = LhvModel()
    lam = np.array([0.0, math.pi / 2, math.pi, 3 * math.pi / 2 + 0.01])
    np.testing.assert_array_equal(model.response(0.0, lam), [1, 1, -1, 1])


def test_sampled_chsh_near_bound():
    report = lhv_estimate(DEFAULT_ANGLES, 200_000, seed=1)
    assert report.analytic_lhs == pytest.approx(2.0, abs=1e-12)
    assert abs(report.lhs_value - 2.0) < 5 * report.standard_error
    assert report.lhs_value <= 2.0 + 5 * report.standard_error


def test_sampled_correlation_reproducible():
    model = LhvModel(batch_size=10_000)
    a = model.sample_correlation(0.3, 1.0, 55_000, seed=4, threads=1)
    b = model.sample_correlation(0.3, 1.0, 55_000, seed=4, threads=4)
    assert a == b
    assert abs(a[0] - lhv_exact_correlation(0.3, 1.0)) < 5 * a[1]


def test_sampled_lhv_respects_bound_over_random_sets():
    """무작위 각도 100 세트: 표본 CHSH ≤ 2 + 통계 오차"""
    rng = np.random.default_rng(99)
    excess = []
    for index, row in enumerate(rng.uniform(0.0, 2 * math.pi, size=(100, 4))):
        report = lhv_estimate(AngleSet(*row), shots=5_000, seed=index)
        assert report.analytic_lhs <= 2.0 + 1e-12
        assert report.lhs_value <= 2.0 + 5 * report.standard_error
        excess.append((report.lhs_value - 2.0) / report.standard_error)
    assert sum(e > 3 for e in excess) <= 2
