"""
NOPA 상관 함수

- K(r) = tanh 2r
- K_d(r) = 2 tanh^d r / (1 + tanh^{2d} r)   (d = 1 이면 K)
- E_d(α, β) = ⟨s_{α,d} s'_{β,d}⟩ = cos α cos β + K_d sin α sin β

수치 값은 절단 NOPA 상태에서 schmidt_expectation 으로 계산하고
|수치 − 해석| 과 꼬리 가중치를 함께 보고한다.

Author: GNJz (Qquarts)
Version: 1.0.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..core.exceptions import ConsistencyError
from ..core.fock_space import TruncatedFockSpace, nopa_coefficients, schmidt_expectation
from ..operators.pseudospin import SpinAxis, build_spin
from ..utils.input_validator import require_angle, require_positive_int, require_squeezing
from ..utils.parallel import parallel_map

logger = logging.getLogger(__name__)

# |수치 − 해석| ≤ ENVELOPE_FACTOR · tail_weight + ROUNDING_FLOOR
ENVELOPE_FACTOR = 10.0
ROUNDING_FLOOR = 1e-12


@dataclass(frozen=True)
class CorrelationQuery:
    """⟨s_{α,d} s'_{β,d}⟩ 질의"""
    alpha: float
    beta: float
    d: int
    r: float

    def __post_init__(self):
        object.__setattr__(self, 'alpha', require_angle(self.alpha, 'alpha'))
        object.__setattr__(self, 'beta', require_angle(self.beta, 'beta'))
        object.__setattr__(self, 'd', require_positive_int(self.d, 'd'))
        object.__setattr__(self, 'r', require_squeezing(self.r))

    def swapped(self) -> 'CorrelationQuery':
        return CorrelationQuery(self.beta, self.alpha, self.d, self.r)


def squeeze_K(r: float) -> float:
    """K = tanh 2r ∈ [0, 1)"""
    return math.tanh(2.0 * require_squeezing(r))


def squeeze_Kd(r: float, d: int) -> float:
    """
    K_d = 2 tanh^d r / (1 + tanh^{2d} r)

    d 에 대해 감소 (0 < r < ∞). t^d 가 언더플로하면 0.
    """
    r = require_squeezing(r)
    d = require_positive_int(d, 'd')
    td = math.tanh(r) ** d
    return 2.0 * td / (1.0 + td * td)


def analytic_correlation(q: CorrelationQuery) -> float:
    """cos α cos β + K_d(r) sin α sin β"""
    return (
        math.cos(q.alpha) * math.cos(q.beta)
        + squeeze_Kd(q.r, q.d) * math.sin(q.alpha) * math.sin(q.beta)
    )


def error_envelope(tail_weight: float) -> float:
    return ENVELOPE_FACTOR * tail_weight + ROUNDING_FLOOR


@dataclass
class NumericCorrelation:
    """수치 상관값과 오차 정보"""
    query: CorrelationQuery
    dimension: int
    numeric: float
    analytic: float
    tail_weight: float
    renormalized: bool = True

    @property
    def abs_err(self) -> float:
        return abs(self.numeric - self.analytic)

    @property
    def error_bound(self) -> float:
        return error_envelope(self.tail_weight)

    @property
    def within_bound(self) -> bool:
        return self.abs_err <= self.error_bound

    def to_row(self) -> dict:
        return {
            'r': self.query.r,
            'd': self.query.d,
            'alpha': self.query.alpha,
            'beta': self.query.beta,
            'analytic': self.analytic,
            'numeric': self.numeric,
            'abs_err': self.abs_err,
            'tail_weight': self.tail_weight,
        }


def numeric_correlation(q: CorrelationQuery,
                        space: Optional[TruncatedFockSpace] = None,
                        renormalize: bool = True) -> NumericCorrelation:
    """
    절단 NOPA 상태에서 ⟨s_{α,d} ⊗ s'_{β,d}⟩ 계산

    Args:
        q: 질의
        space: 절단 공간 (None 이면 꼬리 가중치 기준 자동 선택)
        renormalize: False 이면 원시 계수 사용 (오차는 보고만 함)

    Raises:
        TruncationError: 2d ∤ M
        ConsistencyError: 재정규화 모드에서 오차가 한계를 넘음
    """
    if space is None:
        space = TruncatedFockSpace.for_squeezing(q.r)
    A = build_spin(SpinAxis.theta(q.alpha), q.d, space)
    B = build_spin(SpinAxis.theta(q.beta), q.d, space)
    state = nopa_coefficients(q.r, space, renormalize=renormalize)
    result = NumericCorrelation(
        query=q,
        dimension=space.dimension,
        numeric=float(schmidt_expectation(state, A, B).real),
        analytic=analytic_correlation(q),
        tail_weight=state.tail_weight,
        renormalized=renormalize,
    )
    if not result.within_bound:
        message = (
            f"상관 오차 {result.abs_err:.3e} > 한계 {result.error_bound:.3e} "
            f"(r={q.r}, d={q.d}, M={space.dimension})"
        )
        if renormalize:
            raise ConsistencyError(message)
        logger.warning(message)
    return result


def correlation_sweep(queries: Sequence[CorrelationQuery],
                      space: Optional[TruncatedFockSpace] = None,
                      renormalize: bool = True,
                      threads: Optional[int] = None) -> List[NumericCorrelation]:
    """질의 목록을 병렬 계산 (결과 순서 = 입력 순서)"""
    return parallel_map(lambda q: numeric_correlation(q, space, renormalize), queries, threads)


def angle_grid(count: int, start: float = 0.0, stop: float = math.pi) -> np.ndarray:
    """[start, stop] 등간격 각도 count 개"""
    count = require_positive_int(count, 'count')
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)
