"""
통계적 검증 모듈

샘플링 결과의 표준오차, 오차 전파, z-점수, 수렴 기울기 계산
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np
from scipy import stats

from ..core.exceptions import InvalidParameterError

# 분산 0 판단 기준
EPSILON = 1e-15


def correlation_standard_error(E: float, shots: int) -> float:
    """±1 결과 상관값의 이항 표준오차 √((1 − E²)/shots)"""
    if shots < 1:
        raise InvalidParameterError(f"shots는 1 이상이어야 합니다: {shots}")
    return math.sqrt(max(1.0 - E * E, 0.0) / shots)


def histogram_moments(values: np.ndarray, counts: np.ndarray) -> Dict[str, float]:
    """
    히스토그램 (값, 개수) 의 평균, 분산, 평균의 표준오차

    Returns:
        {'mean', 'variance', 'standard_error', 'n'}
    """
    values = np.asarray(values, dtype=np.float64)
    counts = np.asarray(counts, dtype=np.float64)
    n = float(np.sum(counts))
    if n <= 0:
        raise InvalidParameterError("빈 히스토그램입니다")
    mean = float(np.dot(values, counts) / n)
    variance = float(np.dot((values - mean) ** 2, counts) / n)
    if variance < EPSILON:
        variance = 0.0
    return {
        'mean': mean,
        'variance': variance,
        'standard_error': math.sqrt(variance / n),
        'n': n,
    }


def propagate_standard_error(errors: Sequence[float], coefficients: Sequence[float] = None) -> float:
    """
    독립 항의 선형 결합 Σ a_i X_i 의 표준오차 √(Σ (a_i σ_i)²)

    |·| 로 조합된 Bell 함수도 각 항의 미분 크기가 1 이므로 같은 식을 쓴다.
    """
    errors = np.asarray(errors, dtype=np.float64)
    if coefficients is None:
        coefficients = np.ones_like(errors)
    coefficients = np.asarray(coefficients, dtype=np.float64)
    return float(np.sqrt(np.sum((coefficients * errors) ** 2)))


def z_score(value: float, reference: float, sigma: float) -> float:
    """(value − reference) / σ; σ = 0 이면 차이가 없을 때 0, 있으면 ±inf"""
    diff = value - reference
    if sigma <= 0.0:
        if diff == 0.0:
            return 0.0
        return math.copysign(math.inf, diff)
    return diff / sigma


def sigma_multiplier(confidence: float = 0.95) -> float:
    """양측 신뢰수준의 정규분포 임계값 (0.95 → 1.96)"""
    if not 0.0 < confidence < 1.0:
        raise InvalidParameterError(f"confidence는 (0, 1) 범위여야 합니다: {confidence}")
    return float(stats.norm.ppf(0.5 + confidence / 2.0))


class SeedSweepStatistics:
    """
    시드 스윕 결과 통계

    같은 설정을 여러 시드로 반복한 추정값을 모아 RMS 오차와 신뢰구간을 계산한다.
    """

    def __init__(self, reference: float = 0.0):
        self.reference = reference
        self.values: List[float] = []

    def add(self, value: float):
        if not math.isfinite(value):
            raise InvalidParameterError(f"유효하지 않은 추정값: {value}")
        self.values.append(float(value))

    def __len__(self) -> int:
        return len(self.values)

    def rms_error(self) -> float:
        """√(mean((x − reference)²))"""
        if not self.values:
            return 0.0
        errors = np.asarray(self.values) - self.reference
        return float(np.sqrt(np.mean(errors ** 2)))

    def confidence_interval(self, alpha: float = 0.05) -> Dict[str, float]:
        """
        평균의 신뢰구간 (n < 30 이면 t-분포, 아니면 정규분포)
        """
        scores = np.asarray(self.values)
        n = len(scores)
        if n == 0:
            return {'mean': 0.0, 'lower': 0.0, 'upper': 0.0, 'margin': 0.0}
        mean = float(np.mean(scores))
        if n == 1:
            return {'mean': mean, 'lower': mean, 'upper': mean, 'margin': 0.0}
        std = float(np.std(scores, ddof=1))
        if n < 30:
            critical = stats.t.ppf(1 - alpha / 2, df=n - 1)
        else:
            critical = stats.norm.ppf(1 - alpha / 2)
        margin = float(critical * std / np.sqrt(n))
        return {'mean': mean, 'lower': mean - margin, 'upper': mean + margin, 'margin': margin}


@dataclass
class ConvergenceFit:
    """log(오차) = slope · log(shots) + intercept 회귀 결과"""
    slope: float
    intercept: float
    slope_stderr: float
    r_value: float
    shots: List[int]
    errors: List[float]

    def within(self, expected: float = -0.5, tolerance: float = 0.1) -> bool:
        return abs(self.slope - expected) <= tolerance


def fit_convergence(shots: Sequence[int], errors: Sequence[float]) -> ConvergenceFit:
    """
    샘플 수 대비 오차의 log-log 선형 회귀 (scipy.stats.linregress)

    Raises:
        InvalidParameterError: 점이 2개 미만이거나 오차가 0 이하
    """
    shots = [int(s) for s in shots]
    errors = [float(e) for e in errors]
    if len(shots) < 2 or len(shots) != len(errors):
        raise InvalidParameterError("회귀에는 길이가 같은 2개 이상의 점이 필요합니다")
    if any(e <= 0 for e in errors) or any(s <= 0 for s in shots):
        raise InvalidParameterError(f"log-log 회귀에는 양수만 사용할 수 있습니다: {errors}")
    fit = stats.linregress(np.log(shots), np.log(errors))
    return ConvergenceFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        slope_stderr=float(fit.stderr),
        r_value=float(fit.rvalue),
        shots=shots,
        errors=errors,
    )
