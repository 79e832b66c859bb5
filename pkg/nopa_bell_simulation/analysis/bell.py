"""
Bell 함수 (Bell Functionals)

설정: 측정자 A 는 α, β / 측정자 B 는 γ, δ

- CHSH:     |E_αγ + E_αδ| + |E_βγ − E_βδ| ≤ 2
- 비트 XOR: |X_αγ + X_αδ − W| + |X_βγ − X_βδ| ≤ W
    X = Σ_k w_k ⟨B_k ⊕ B'_k⟩,  W = Σ_k w_k
    · BIT_XOR(k):    w = 1 (k번째 비트만)      → 한계 1
    · NUMBER_XOR(d): w_k = 2^k (k < d)        → 한계 2^d − 1
    · HAMMING(d):    w_k = 1 (k < d)          → 한계 d
    · WEIGHTED:      임의 w_k ≥ 0             → 한계 Σ w_k
  familiar=True 이면 |X_αγ + X_αδ| + |X_βγ − X_βδ| ≤ 2W 형태

비트 하나의 XOR 기댓값: ⟨B ⊕ B'⟩ = (1 − ⟨S S'⟩)/2

NOPA 설정 규약: (α, β, γ, δ) = (0, π/2, γ, −γ)
  → CHSH = 2(|cos γ| + K_d |sin γ|)
  → XOR = W |cos γ| + (Σ w_k K_{2^k}) |sin γ|

a|cos γ| + b|sin γ| 의 최대값은 γ* = arctan(b/a) 에서 √(a² + b²)

Author: GNJz (Qquarts)
Version: 1.0.0
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import InvalidCorrelationError, InvalidParameterError
from ..core.fock_space import SparseOperator, TruncatedFockSpace, nopa_coefficients, schmidt_expectation
from ..operators.number_bits import NumberBasis, bit_operator
from ..operators.pseudospin import SpinAxis, build_spin
from ..utils.input_validator import (
    format_pi_multiple,
    require_angle,
    require_nonnegative_int,
    require_positive_int,
    require_squeezing,
    require_weights,
)
from ..utils.statistics import z_score
from .correlations import CorrelationQuery, analytic_correlation, error_envelope, squeeze_Kd

logger = logging.getLogger(__name__)

# 상관값 [-1, 1] 범위 검사 허용 오차
CORRELATION_TOLERANCE = 1e-12

# γ* 격자 교차 검증
GRID_POINTS = 10_000
GRID_TOLERANCE = 1e-6


class BellKind(str, Enum):
    CHSH = "chsh"
    BIT_XOR = "bit_xor"
    NUMBER_XOR = "number_xor"
    HAMMING = "hamming"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class AngleSet:
    """네 측정 설정 (A: α, β / B: γ, δ)"""
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in ('alpha', 'beta', 'gamma', 'delta'):
            object.__setattr__(self, name, require_angle(getattr(self, name), name))

    @classmethod
    def nopa_convention(cls, gamma: float) -> 'AngleSet':
        """(0, π/2, γ, −γ)"""
        gamma = require_angle(gamma, 'gamma')
        return cls(0.0, math.pi / 2, gamma, -gamma)

    def pairs(self) -> List[Tuple[float, float]]:
        """(αγ, αδ, βγ, βδ) 순서의 설정 쌍"""
        return [
            (self.alpha, self.gamma),
            (self.alpha, self.delta),
            (self.beta, self.gamma),
            (self.beta, self.delta),
        ]


@dataclass
class BellReport:
    """
    Bell 함수 평가 결과

    Attributes:
        kind: 함수 종류
        lhs_value: 좌변 값
        classical_bound: 국소 실재론 한계 (> 0)
        order: BIT_XOR 는 k, NUMBER_XOR/HAMMING 은 d, WEIGHTED 는 가중치 개수
        standard_error: 샘플링 추정일 때만
        optimal_gamma / max_lhs: NOPA 설정 규약에서 γ 최적화 결과
        analytic_lhs / tail_weight: 절단 수치 평가일 때 비교값
    """
    kind: BellKind
    lhs_value: float
    classical_bound: float
    order: Optional[int] = None
    familiar: bool = False
    gamma: Optional[float] = None
    r: Optional[float] = None
    standard_error: Optional[float] = None
    optimal_gamma: Optional[float] = None
    max_lhs: Optional[float] = None
    analytic_lhs: Optional[float] = None
    tail_weight: Optional[float] = None
    shots: Optional[int] = None
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.kind = BellKind(self.kind)
        if not self.classical_bound > 0:
            raise InvalidParameterError(f"classical_bound는 양수여야 합니다: {self.classical_bound}")

    @property
    def violation(self) -> float:
        return self.lhs_value - self.classical_bound

    @property
    def max_violation(self) -> Optional[float]:
        if self.max_lhs is None:
            return None
        return self.max_lhs - self.classical_bound

    @property
    def z_score(self) -> Optional[float]:
        """위반의 표준오차 단위 크기"""
        if self.standard_error is None:
            return None
        return z_score(self.lhs_value, self.classical_bound, self.standard_error)

    def to_row(self) -> Dict[str, object]:
        """CLI 출력용 행"""
        return {
            'kind': self.kind.value,
            'order': self.order,
            'familiar': self.familiar,
            'r': self.r,
            'gamma': self.gamma,
            'lhs': self.lhs_value,
            'bound': self.classical_bound,
            'violation': self.violation,
            'gamma_opt': self.optimal_gamma,
            'gamma_opt_over_pi': None if self.optimal_gamma is None else format_pi_multiple(self.optimal_gamma),
            'max_lhs': self.max_lhs,
            'max_violation': self.max_violation,
        }


# ----------------------------------------------------------------------
# 일반 함수
# ----------------------------------------------------------------------

def _require_correlation(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or abs(value) > 1.0 + CORRELATION_TOLERANCE:
        raise InvalidCorrelationError(f"{name}={value} 은 [-1, 1] 범위 밖입니다")
    return min(max(value, -1.0), 1.0)


def chsh_functional(E_ag: float, E_ad: float, E_bg: float, E_bd: float) -> BellReport:
    """
    |E_αγ + E_αδ| + |E_βγ − E_βδ|, 한계 2

    Raises:
        InvalidCorrelationError: 상관값이 [-1, 1] 밖
    """
    E_ag = _require_correlation(E_ag, 'E_ag')
    E_ad = _require_correlation(E_ad, 'E_ad')
    E_bg = _require_correlation(E_bg, 'E_bg')
    E_bd = _require_correlation(E_bd, 'E_bd')
    lhs = abs(E_ag + E_ad) + abs(E_bg - E_bd)
    return BellReport(kind=BellKind.CHSH, lhs_value=lhs, classical_bound=2.0)


def classical_bound(kind: BellKind, order: Optional[int] = None,
                    weights: Optional[Sequence[float]] = None, familiar: bool = False) -> float:
    """종류별 국소 실재론 한계"""
    kind = BellKind(kind)
    if kind is BellKind.CHSH:
        return 2.0
    if kind is BellKind.BIT_XOR:
        total = 1.0
    elif kind is BellKind.NUMBER_XOR:
        total = float(2 ** require_positive_int(order, 'd') - 1)
    elif kind is BellKind.HAMMING:
        total = float(require_positive_int(order, 'd'))
    else:
        total = float(np.sum(require_weights(weights)))
    return 2.0 * total if familiar else total


def xor_functional(X_ag: float, X_ad: float, X_bg: float, X_bd: float, weight_total: float,
                   kind: BellKind = BellKind.WEIGHTED, order: Optional[int] = None,
                   familiar: bool = False) -> BellReport:
    """
    가중 비트 XOR 함수

    Args:
        X_*: 설정 쌍별 Σ w_k ⟨B_k ⊕ B'_k⟩ (범위 [0, W])
        weight_total: W = Σ w_k
        familiar: True 이면 |X_αγ + X_αδ| + |X_βγ − X_βδ| ≤ 2W

    Raises:
        InvalidCorrelationError: X 가 [0, W] 밖
    """
    if not weight_total > 0:
        raise InvalidParameterError(f"가중치 합은 양수여야 합니다: {weight_total}")
    values = []
    for name, value in (('X_ag', X_ag), ('X_ad', X_ad), ('X_bg', X_bg), ('X_bd', X_bd)):
        value = float(value)
        slack = CORRELATION_TOLERANCE * weight_total
        if not math.isfinite(value) or value < -slack or value > weight_total + slack:
            raise InvalidCorrelationError(f"{name}={value} 은 [0, {weight_total}] 범위 밖입니다")
        values.append(min(max(value, 0.0), weight_total))
    X_ag, X_ad, X_bg, X_bd = values

    if familiar:
        lhs = abs(X_ag + X_ad) + abs(X_bg - X_bd)
        bound = 2.0 * weight_total
    else:
        lhs = abs(X_ag + X_ad - weight_total) + abs(X_bg - X_bd)
        bound = weight_total
    return BellReport(kind=kind, lhs_value=lhs, classical_bound=bound, order=order, familiar=familiar)


# ----------------------------------------------------------------------
# γ 최적화
# ----------------------------------------------------------------------

@dataclass
class GammaOptimum:
    """a|cos γ| + b|sin γ| 최대화 결과"""
    gamma: float
    value: float
    grid_gamma: float
    grid_value: float

    @property
    def grid_gap(self) -> float:
        return self.value - self.grid_value


def maximize_over_gamma(a: float, b: float, grid_points: int = GRID_POINTS) -> GammaOptimum:
    """
    a|cos γ| + b|sin γ| (a, b ≥ 0) 의 최대값

    닫힌 형태 γ* = arctan(b/a), 값 √(a² + b²) 를
    [0, π/2] 등간격 격자 탐색으로 교차 검증한다.
    """
    if a < 0 or b < 0 or not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidParameterError(f"a, b 는 유한한 0 이상이어야 합니다: a={a}, b={b}")
    gamma = math.atan2(b, a)
    value = math.hypot(a, b)

    grid = np.linspace(0.0, math.pi / 2, grid_points)
    curve = a * np.abs(np.cos(grid)) + b * np.abs(np.sin(grid))
    best = int(np.argmax(curve))
    optimum = GammaOptimum(gamma=gamma, value=value, grid_gamma=float(grid[best]), grid_value=float(curve[best]))

    if not -1e-12 <= optimum.grid_gap <= GRID_TOLERANCE * max(1.0, value):
        logger.warning(f"γ* 격자 검증 불일치: 닫힌 형태 {value:.12f}, 격자 {optimum.grid_value:.12f}")
    return optimum


def optimal_gamma(d: int, r: float) -> Tuple[float, float]:
    """
    CHSH 최적 γ* = arctan K_d 와 최대값 2√(1 + K_d²)

    r = 0 이면 (0, 2): 위반 없음 (퇴화, 경고 기록)
    """
    d = require_positive_int(d, 'd')
    r = require_squeezing(r)
    if r == 0.0:
        logger.warning("r=0: 진공 상태에서는 γ 최적화가 퇴화합니다 (최대값 2, 위반 없음)")
        return 0.0, 2.0
    optimum = maximize_over_gamma(2.0, 2.0 * squeeze_Kd(r, d))
    return optimum.gamma, optimum.value


# ----------------------------------------------------------------------
# NOPA 닫힌 형태
# ----------------------------------------------------------------------

def chsh_nopa(gamma: float, d: int, r: float) -> BellReport:
    """2(|cos γ| + K_d |sin γ|), 설정 (0, π/2) 대 (γ, −γ)"""
    gamma = require_angle(gamma, 'gamma')
    d = require_positive_int(d, 'd')
    angles = AngleSet.nopa_convention(gamma)
    E = [analytic_correlation(CorrelationQuery(a, b, d, r)) for a, b in angles.pairs()]
    report = chsh_functional(*E)
    report.order = d
    report.gamma = gamma
    report.r = r
    report.optimal_gamma, report.max_lhs = optimal_gamma(d, r)
    return report


def _nopa_weighted(weights: np.ndarray, gamma: float, r: float, kind: BellKind,
                   order: Optional[int], familiar: bool) -> BellReport:
    """
    비트별 해석 상관값 E_k 로 가중 XOR 함수 평가

    X = Σ_k w_k (1 − E_{2^k}) / 2
    """
    gamma = require_angle(gamma, 'gamma')
    r = require_squeezing(r)
    angles = AngleSet.nopa_convention(gamma)
    total = float(np.sum(weights))

    X = []
    for a, b in angles.pairs():
        x = 0.0
        for k, w in enumerate(weights):
            if w > 0:
                x += w * (1.0 - analytic_correlation(CorrelationQuery(a, b, 2 ** k, r))) / 2.0
        X.append(x)
    report = xor_functional(*X, weight_total=total, kind=kind, order=order, familiar=familiar)
    report.gamma = gamma
    report.r = r

    coupling = float(sum(w * squeeze_Kd(r, 2 ** k) for k, w in enumerate(weights) if w > 0))
    if r == 0.0:
        logger.warning("r=0: 진공 상태에서는 γ 최적화가 퇴화합니다 (위반 없음)")
    optimum = maximize_over_gamma(total, coupling)
    if familiar:
        # W(1 − cos γ) + B|sin γ| 는 γ ∈ [π/2, π] 에서 최대
        report.optimal_gamma = math.pi - optimum.gamma
        report.max_lhs = total + optimum.value
    else:
        report.optimal_gamma = optimum.gamma
        report.max_lhs = optimum.value
    return report


def bit_bell_nopa(gamma: float, k: int, r: float, familiar: bool = False) -> BellReport:
    """k번째 비트 XOR: |cos γ| + K_{2^k} |sin γ|, 한계 1 (CHSH 의 절반)"""
    k = require_nonnegative_int(k, 'k')
    weights = np.zeros(k + 1)
    weights[k] = 1.0
    return _nopa_weighted(weights, gamma, r, BellKind.BIT_XOR, k, familiar)


def number_bell_nopa(gamma: float, d: int, r: float, familiar: bool = False) -> BellReport:
    """수 XOR: (2^d − 1)|cos γ| + (Σ 2^k K_{2^k}) |sin γ|, 한계 2^d − 1"""
    d = require_positive_int(d, 'd')
    weights = 2.0 ** np.arange(d)
    return _nopa_weighted(weights, gamma, r, BellKind.NUMBER_XOR, d, familiar)


def hamming_bell_nopa(gamma: float, d: int, r: float, familiar: bool = False) -> BellReport:
    """Hamming 거리: d|cos γ| + (Σ K_{2^k}) |sin γ|, 한계 d"""
    d = require_positive_int(d, 'd')
    return _nopa_weighted(np.ones(d), gamma, r, BellKind.HAMMING, d, familiar)


def weighted_bell_nopa(weights: Sequence[float], gamma: float, r: float, familiar: bool = False) -> BellReport:
    """
    임의 가중치: (Σ w_k)|cos γ| + (Σ w_k K_{2^k}) |sin γ|, 한계 Σ w_k

    하위 비트를 0 가중치로 두면 접근하기 어려운 비트를 제외할 수 있다.
    """
    weights = require_weights(weights)
    return _nopa_weighted(weights, gamma, r, BellKind.WEIGHTED, len(weights), familiar)


def kind_weights(kind: BellKind, order: Optional[int] = None,
                 weights: Optional[Sequence[float]] = None) -> np.ndarray:
    """종류별 비트 가중치 벡터"""
    kind = BellKind(kind)
    if kind is BellKind.BIT_XOR:
        k = require_nonnegative_int(order, 'k')
        result = np.zeros(k + 1)
        result[k] = 1.0
        return result
    if kind is BellKind.NUMBER_XOR:
        return 2.0 ** np.arange(require_positive_int(order, 'd'))
    if kind is BellKind.HAMMING:
        return np.ones(require_positive_int(order, 'd'))
    if kind is BellKind.WEIGHTED:
        return require_weights(weights)
    raise InvalidParameterError("CHSH 에는 비트 가중치가 없습니다")


def analytic_bell(kind: BellKind, angles: AngleSet, r: float, order: Optional[int] = None,
                  weights: Optional[Sequence[float]] = None, familiar: bool = False) -> BellReport:
    """
    임의 설정 (α, β, γ, δ) 에서 해석 상관값으로 계산한 Bell 함수 좌변

    CHSH 는 E_d(θ, θ') 를, XOR 계열은 Σ w_k (1 − E_{2^k})/2 를 쓴다.
    """
    kind = BellKind(kind)
    r = require_squeezing(r)
    if kind is BellKind.CHSH:
        d = order or 1
        report = chsh_functional(*[analytic_correlation(CorrelationQuery(a, b, d, r)) for a, b in angles.pairs()])
        report.order = d
    else:
        w = kind_weights(kind, order, weights)
        X = [
            sum(wk * (1.0 - analytic_correlation(CorrelationQuery(a, b, 2 ** k, r))) / 2.0
                for k, wk in enumerate(w) if wk > 0)
            for a, b in angles.pairs()
        ]
        report = xor_functional(*X, weight_total=float(np.sum(w)), kind=kind,
                                order=order if kind is not BellKind.WEIGHTED else len(w), familiar=familiar)
    report.r = r
    return report


def nopa_bell(kind: BellKind, gamma: float, r: float, order: Optional[int] = None,
              weights: Optional[Sequence[float]] = None, familiar: bool = False) -> BellReport:
    """종류별 닫힌 형태 디스패치 (CHSH 는 order = d)"""
    kind = BellKind(kind)
    if kind is BellKind.CHSH:
        return chsh_nopa(gamma, order or 1, r)
    if kind is BellKind.BIT_XOR:
        return bit_bell_nopa(gamma, order, r, familiar)
    if kind is BellKind.NUMBER_XOR:
        return number_bell_nopa(gamma, order, r, familiar)
    if kind is BellKind.HAMMING:
        return hamming_bell_nopa(gamma, order, r, familiar)
    return weighted_bell_nopa(weights, gamma, r, familiar)


# ----------------------------------------------------------------------
# 절단 연산자 수치 평가
# ----------------------------------------------------------------------

def numeric_bell_nopa(kind: BellKind, gamma: float, r: float, space: TruncatedFockSpace,
                      order: Optional[int] = None, weights: Optional[Sequence[float]] = None,
                      familiar: bool = False, renormalize: bool = True) -> BellReport:
    """
    절단 NOPA 상태와 절단 연산자로 Bell 함수 평가

    - CHSH: ⟨s_{θ,d} ⊗ s'_{θ',d}⟩
    - XOR 계열: ⟨b ⊗ I⟩ + ⟨I ⊗ b'⟩ − 2⟨b ⊗ b'⟩ (양자 XOR 의 기댓값)

    analytic_lhs 와 tail_weight 를 함께 채운다.

    Raises:
        TruncationError: 필요한 비트가 M 을 넘음
    """
    kind = BellKind(kind)
    analytic = nopa_bell(kind, gamma, r, order=order, weights=weights, familiar=familiar)
    state = nopa_coefficients(r, space, renormalize=renormalize)
    angles = AngleSet.nopa_convention(gamma)

    if kind is BellKind.CHSH:
        d = order or 1
        E = []
        for a, b in angles.pairs():
            A = build_spin(SpinAxis.theta(a), d, space)
            B = build_spin(SpinAxis.theta(b), d, space)
            E.append(schmidt_expectation(state, A, B).real)
        report = chsh_functional(*E)
        report.order = d
    else:
        w = kind_weights(kind, order, weights)
        identity = SparseOperator.identity(space.dimension)
        X = []
        for a, b in angles.pairs():
            x = 0.0
            for k, wk in enumerate(w):
                if wk == 0:
                    continue
                bA = bit_operator(NumberBasis.theta(a), k, space)
                bB = bit_operator(NumberBasis.theta(b), k, space)
                xor = (
                    schmidt_expectation(state, bA, identity)
                    + schmidt_expectation(state, identity, bB)
                    - 2.0 * schmidt_expectation(state, bA, bB)
                ).real
                x += wk * xor
            X.append(x)
        report = xor_functional(*X, weight_total=float(np.sum(w)), kind=kind,
                                order=analytic.order, familiar=familiar)

    report.gamma = analytic.gamma
    report.r = r
    report.optimal_gamma = analytic.optimal_gamma
    report.max_lhs = analytic.max_lhs
    report.analytic_lhs = analytic.lhs_value
    report.tail_weight = state.tail_weight

    # 각 항의 오차는 envelope 이하, 네 항의 합
    scale = 2.0 if kind is BellKind.CHSH else float(np.sum(kind_weights(kind, order, weights)))
    allowed = 4.0 * scale * error_envelope(state.tail_weight)
    if abs(report.lhs_value - analytic.lhs_value) > allowed:
        message = f"수치 lhs {report.lhs_value:.12f} 와 닫힌 형태 {analytic.lhs_value:.12f} 의 차이가 큽니다"
        report.warnings.append(message)
        logger.warning(message)
    return report


# ----------------------------------------------------------------------
# 국소 결정론적 전략
# ----------------------------------------------------------------------

@dataclass
class LocalStrategyReport:
    """단일 비트 결정론적 국소 전략 전수 조사 결과"""
    strategies: int
    max_chsh: float
    max_bit_xor: float
    max_bit_xor_familiar: float
    chsh_saturating: int
    bit_xor_saturating: int

    @property
    def passed(self) -> bool:
        return (
            self.max_chsh <= 2.0
            and self.max_bit_xor <= 1.0
            and self.max_bit_xor_familiar <= 2.0
            and self.chsh_saturating > 0
            and self.bit_xor_saturating > 0
        )


def enumerate_local_strategies() -> LocalStrategyReport:
    """
    모든 결정론적 국소 전략 (A(α), A(β), B(γ), B(δ)) ∈ {±1}⁴ 에 대해
    CHSH 와 비트 XOR 좌변을 계산

    E_xy = a_x b_y, 비트 B = (1 − S)/2, X_xy = B_x ⊕ B'_y
    """
    max_chsh = max_bit = max_familiar = 0.0
    chsh_saturating = bit_saturating = 0
    count = 0
    for a_alpha, a_beta, b_gamma, b_delta in itertools.product((1, -1), repeat=4):
        count += 1
        chsh = chsh_functional(a_alpha * b_gamma, a_alpha * b_delta, a_beta * b_gamma, a_beta * b_delta)

        bits = {name: (1 - s) // 2 for name, s in
                (('a', a_alpha), ('b', a_beta), ('g', b_gamma), ('d', b_delta))}
        X = [bits['a'] ^ bits['g'], bits['a'] ^ bits['d'], bits['b'] ^ bits['g'], bits['b'] ^ bits['d']]
        tight = xor_functional(*X, weight_total=1.0, kind=BellKind.BIT_XOR, order=0)
        loose = xor_functional(*X, weight_total=1.0, kind=BellKind.BIT_XOR, order=0, familiar=True)

        max_chsh = max(max_chsh, chsh.lhs_value)
        max_bit = max(max_bit, tight.lhs_value)
        max_familiar = max(max_familiar, loose.lhs_value)
        chsh_saturating += int(chsh.lhs_value == 2.0)
        bit_saturating += int(tight.lhs_value == 1.0)

    return LocalStrategyReport(
        strategies=count,
        max_chsh=max_chsh,
        max_bit_xor=max_bit,
        max_bit_xor_familiar=max_familiar,
        chsh_saturating=chsh_saturating,
        bit_xor_saturating=bit_saturating,
    )
