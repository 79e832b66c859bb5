"""
NOPA 상관 함수 테스트 (닫힌 형태 대 절단 수치값)
"""

import math

import numpy as np
import pytest

from nopa_bell_simulation.core.exceptions import InvalidParameterError, TruncationError
from nopa_bell_simulation.core.fock_space import TruncatedFockSpace
from nopa_bell_simulation.analysis.correlations import (
    CorrelationQuery,
    analytic_correlation,
    angle_grid,
    correlation_sweep,
    error_envelope,
    numeric_correlation,
    squeeze_K,
    squeeze_Kd,
)

T1 = math.tanh(1.0)
K2_AT_1 = 2 * T1 ** 2 / (1 + T1 ** 4)


def test_squeeze_constants():
    assert squeeze_K(1.0) == pytest.approx(0.9640275801, abs=1e-10)
    assert squeeze_Kd(1.0, 1) == pytest.approx(squeeze_K(1.0), abs=1e-15)
    assert squeeze_Kd(1.0, 2) == pytest.approx(K2_AT_1, abs=1e-12)
    assert squeeze_K(0.0) == 0.0


def test_Kd_decreases_with_group_size():
    values = [squeeze_Kd(1.0, d) for d in (1, 2, 3, 4, 8)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert squeeze_Kd(1.0, 10_000) == 0.0


def test_Kd_saturates():
    assert squeeze_Kd(20.0, 1) == pytest.approx(1.0, abs=1e-15)


def test_analytic_correlation_limits():
    q = CorrelationQuery(0.0, 0.0, 1, 0.5)
    assert analytic_correlation(q) == pytest.approx(1.0)
    q = CorrelationQuery(math.pi / 2, math.pi / 2, 2, 1.0)
    assert analytic_correlation(q) == pytest.approx(squeeze_Kd(1.0, 2))
    q = CorrelationQuery(0.4, 1.1, 2, 0.8)
    assert analytic_correlation(q) == pytest.approx(analytic_correlation(q.swapped()), abs=1e-15)


@pytest.mark.parametrize("d", [1, 2, 4])
@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_numeric_matches_analytic(d, r):
    """재정규화 상태에서 2d | M 이면 수치값 = 닫힌 형태"""
    space = TruncatedFockSpace(16)
    for alpha, beta in [(0.0, 0.0), (math.pi / 2, math.pi / 2), (0.3, -1.2), (math.pi / 4, math.pi / 3)]:
        result = numeric_correlation(CorrelationQuery(alpha, beta, d, r), space)
        assert result.within_bound
        assert result.numeric == pytest.approx(result.analytic, abs=1e-10)


def test_numeric_K2_example():
    result = numeric_correlation(CorrelationQuery(math.pi / 2, math.pi / 2, 2, 1.0), TruncatedFockSpace(16))
    assert result.numeric == pytest.approx(K2_AT_1, abs=1e-12)
    row = result.to_row()
    assert list(row) == ['r', 'd', 'alpha', 'beta', 'analytic', 'numeric', 'abs_err', 'tail_weight']


def test_raw_mode_error_follows_tail():
    """원시 계수: |오차| = K · tail ≤ 10 · tail"""
    space = TruncatedFockSpace(4)
    result = numeric_correlation(CorrelationQuery(math.pi / 2, math.pi / 2, 1, 2.0), space, renormalize=False)
    assert result.abs_err == pytest.approx(squeeze_K(2.0) * result.tail_weight, rel=1e-9)
    assert result.within_bound
    assert result.error_bound == error_envelope(result.tail_weight)


def test_incompatible_group_rejected():
    with pytest.raises(TruncationError):
        numeric_correlation(CorrelationQuery(0.0, 0.0, 3, 1.0), TruncatedFockSpace(16))


def test_invalid_query():
    with pytest.raises(InvalidParameterError):
        CorrelationQuery(0.0, 0.0, 0, 1.0)
    with pytest.raises(InvalidParameterError):
        CorrelationQuery(float('nan'), 0.0, 1, 1.0)
    with pytest.raises(InvalidParameterError):
        CorrelationQuery(0.0, 0.0, 1, -1.0)


def test_sweep_preserves_order():
    queries = [CorrelationQuery(a, 0.5, 1, 1.0) for a in angle_grid(7)]
    serial = correlation_sweep(queries, TruncatedFockSpace(16), threads=1)
    threaded = correlation_sweep(queries, TruncatedFockSpace(16), threads=4)
    assert [r.query for r in serial] == queries
    assert [r.numeric for r in serial] == [r.numeric for r in threaded]


def test_angle_grid():
    assert list(angle_grid(1)) == [0.0]
    grid = angle_grid(5, 0.0, math.pi)
    assert grid[0] == 0.0 and grid[-1] == pytest.approx(math.pi)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_z_correlation_is_one(r):
    result = numeric_correlation(CorrelationQuery(0.0, 0.0, 2, r), TruncatedFockSpace.from_bit_depth(6))
    assert result.numeric == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("renormalize", [True, False])
def test_numeric_envelope_random_grid(renormalize):
    """r ∈ [0.1, 2], d ∈ {1, 2, 4}, 임의 각도 100 점"""
    rng = np.random.default_rng(2024)
    space = TruncatedFockSpace(64)
    for _ in range(100):
        r = float(rng.uniform(0.1, 2.0))
        d = int(rng.choice([1, 2, 4]))
        alpha, beta = (float(x) for x in rng.uniform(-math.pi, math.pi, size=2))
        result = numeric_correlation(CorrelationQuery(alpha, beta, d, r), space, renormalize=renormalize)
        assert result.abs_err <= 10 * result.tail_weight + 1e-12


def test_numeric_correlation_is_bilinear():
    """축 방향 네 값으로 임의 (α, β) 상관값 결정"""
    space = TruncatedFockSpace(32)
    for d, r in ((1, 0.7), (2, 1.4), (4, 0.3)):
        corner = {
            (a, b): numeric_correlation(CorrelationQuery(a, b, d, r), space).numeric
            for a in (0.0, math.pi / 2) for b in (0.0, math.pi / 2)
        }
        for alpha, beta in ((0.3, -1.1), (2.2, 0.9), (-2.7, 1.6)):
            ca, sa, cb, sb = math.cos(alpha), math.sin(alpha), math.cos(beta), math.sin(beta)
            expected = (
                ca * cb * corner[(0.0, 0.0)] + ca * sb * corner[(0.0, math.pi / 2)]
                + sa * cb * corner[(math.pi / 2, 0.0)] + sa * sb * corner[(math.pi / 2, math.pi / 2)]
            )
            actual = numeric_correlation(CorrelationQuery(alpha, beta, d, r), space).numeric
            assert actual == pytest.approx(expected, abs=1e-9)
