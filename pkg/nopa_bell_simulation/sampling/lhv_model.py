"""
국소 숨은 변수 (LHV) 기준 모델

λ ~ Uniform[0, 2π), 각 측정자의 응답 S_θ(λ) = sign(cos(θ − λ))  (sign(0) = +1)
응답은 상대편 설정과 무관하다.

정확한 상관값 (삼각파): E(α, β) = 1 − 2Δ/π, Δ = α − β 의 각거리 ∈ [0, π]
→ CHSH ≤ 2, (0, π/2, π/4, −π/4) 에서 정확히 2
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..analysis.bell import AngleSet, BellReport, chsh_functional
from ..utils.input_validator import require_angle, require_positive_int
from ..utils.parallel import parallel_map
from ..utils.reproducibility import ReproducibleRNG
from ..utils.statistics import correlation_standard_error, propagate_standard_error

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def angular_distance(alpha: float, beta: float) -> float:
    """|α − β| 를 [0, π] 로 감은 값"""
    delta = math.fmod(abs(alpha - beta), TWO_PI)
    return TWO_PI - delta if delta > math.pi else delta


def lhv_exact_correlation(alpha: float, beta: float) -> float:
    """E(α, β) = 1 − 2Δ/π"""
    return 1.0 - 2.0 * angular_distance(require_angle(alpha), require_angle(beta)) / math.pi


@dataclass(frozen=True)
class LhvModel:
    """톱니 응답 모델 (결정론적 응답, 균일 λ)"""
    batch_size: int = 100_000

    def response(self, theta: float, lam: np.ndarray) -> np.ndarray:
        """S_θ(λ) ∈ {−1, +1}"""
        return np.where(np.cos(theta - lam) >= 0.0, 1, -1).astype(np.int8)

    def sample_correlation(self, alpha: float, beta: float, shots: int, seed: int,
                           threads: Optional[int] = None) -> Tuple[float, float]:
        """
        (E, 표준오차) 추정

        배치 i 는 하위 스트림 i 에서 λ 를 뽑는다 (정수 합산 후 병합).
        """
        shots = require_positive_int(shots, 'shots')
        rng = ReproducibleRNG(seed)
        full, rest = divmod(shots, self.batch_size)
        sizes = [self.batch_size] * full + ([rest] if rest else [])

        def run(index: int) -> int:
            lam = rng.substream(index).uniform(0.0, TWO_PI, size=sizes[index])
            products = self.response(alpha, lam).astype(np.int64) * self.response(beta, lam)
            return int(products.sum())

        total = sum(parallel_map(run, range(len(sizes)), threads))
        E = total / shots
        return E, correlation_standard_error(E, shots)


def lhv_estimate(angles: AngleSet, shots: int, seed: int,
                 model: Optional[LhvModel] = None, threads: Optional[int] = None) -> BellReport:
    """
    LHV 모델의 CHSH 좌변 Monte Carlo 추정

    analytic_lhs 에 삼각파 상관으로 계산한 정확값을 담는다.
    """
    model = model or LhvModel()
    rng = ReproducibleRNG(seed)
    E, sigma = [], []
    for index, (a, b) in enumerate(angles.pairs()):
        value, error = model.sample_correlation(a, b, shots, rng.child(index).seed, threads)
        E.append(value)
        sigma.append(error)

    report = chsh_functional(*E)
    report.gamma = angles.gamma
    report.shots = shots
    report.standard_error = propagate_standard_error(sigma)
    report.analytic_lhs = lhv_exact_chsh(angles).lhs_value
    logger.info(f"LHV CHSH: {report.lhs_value:.6f} ± {report.standard_error:.2e} (정확값 {report.analytic_lhs:.6f})")
    return report


def lhv_exact_chsh(angles: AngleSet) -> BellReport:
    """삼각파 상관으로 계산한 CHSH (항상 ≤ 2)"""
    report = chsh_functional(*[lhv_exact_correlation(a, b) for a, b in angles.pairs()])
    report.gamma = angles.gamma
    return report
