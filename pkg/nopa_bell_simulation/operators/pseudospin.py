"""
의사스핀 연산자 (Pseudospin Operators)

수 상태를 d개씩 묶어 패리티를 교대로 부여한 스핀-1/2 유사 연산자 계열
- s_{z,d} = Σ_n (−1)^n Σ_{k<d} |dn+k⟩⟨dn+k|
- s_{+,d} = Σ_n Σ_{k<d} |2dn+k⟩⟨2dn+k+d|,  s_{−,d} = s_{+,d}†
- s_{x,d} = s_+ + s_−,  s_{y,d} = −i(s_+ − s_−)
- s_{θ,d} = cos θ · s_{z,d} + sin θ · s_{x,d}   (z–x 평면)

부호 규약: s_z|0⟩ = +|0⟩ (짝수 블록 = +1)

계층 구조:
- d' = 2^k d 이면 s_{·,d} 와 s_{·,d'} 는 교환
  → {s_{·,2^k}} 는 서로 교환하는 스핀계의 무한 계층

Author: GNJz (Qquarts)
Version: 1.0.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from ..core.exceptions import DimensionMismatchError, InvalidParameterError, TruncationError
from ..core.fock_space import SparseOperator, TruncatedFockSpace
from ..utils.input_validator import require_angle, require_positive_int

logger = logging.getLogger(__name__)

# 항등식 허용 잔차
IDENTITY_TOLERANCE = 1e-12

# s_θ² = I 검사용 각도 개수 ([0, 2π) 등간격)
THETA_SAMPLES = 8


class AxisKind(str, Enum):
    Z = "z"
    X = "x"
    Y = "y"
    PLUS = "plus"
    MINUS = "minus"
    THETA = "theta"


@dataclass(frozen=True)
class SpinAxis:
    """측정 축 (THETA 일 때만 angle 사용)"""
    kind: AxisKind
    angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', AxisKind(self.kind))
        if self.kind is AxisKind.THETA:
            object.__setattr__(self, 'angle', require_angle(self.angle, 'theta'))
        else:
            object.__setattr__(self, 'angle', 0.0)

    @classmethod
    def theta(cls, angle: float) -> 'SpinAxis':
        return cls(AxisKind.THETA, angle)

    @classmethod
    def parse(cls, axis: Union['SpinAxis', AxisKind, str]) -> 'SpinAxis':
        if isinstance(axis, SpinAxis):
            return axis
        return cls(AxisKind(axis))


@dataclass(frozen=True)
class SpinFamily:
    """
    d-그룹 의사스핀 계열

    불변식: 2d | M (블록 중간에서 잘린 s_{+,d} 는 s² = I 를 깨므로 거부)
    """
    d: int
    space: TruncatedFockSpace

    def __post_init__(self):
        require_positive_int(self.d, 'd')
        if not self.space.supports_grouping(self.d):
            raise TruncationError(
                f"2d={2 * self.d} 가 M={self.space.dimension} 을 나누지 않습니다"
            )

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def z(self) -> SparseOperator:
        n = np.arange(self.dimension)
        signs = np.where((n // self.d) % 2 == 0, 1.0, -1.0)
        return SparseOperator.diagonal(signs)

    def plus(self) -> SparseOperator:
        M, d = self.dimension, self.d
        blocks = np.arange(M // (2 * d))
        offsets = np.arange(d)
        rows = (2 * d * blocks[:, None] + offsets[None, :]).reshape(-1)
        cols = rows + d
        mat = sparse.coo_matrix((np.ones(rows.size, dtype=np.complex128), (rows, cols)), shape=(M, M))
        return SparseOperator(mat)

    def minus(self) -> SparseOperator:
        return self.plus().adjoint()

    def x(self) -> SparseOperator:
        plus = self.plus()
        return plus + plus.adjoint()

    def y(self) -> SparseOperator:
        plus = self.plus()
        return (plus - plus.adjoint()) * (-1j)

    def theta(self, angle: float) -> SparseOperator:
        angle = require_angle(angle, 'theta')
        return self.z() * math.cos(angle) + self.x() * math.sin(angle)

    def build(self, axis: Union[SpinAxis, AxisKind, str]) -> SparseOperator:
        axis = SpinAxis.parse(axis)
        builders = {
            AxisKind.Z: self.z,
            AxisKind.X: self.x,
            AxisKind.Y: self.y,
            AxisKind.PLUS: self.plus,
            AxisKind.MINUS: self.minus,
        }
        if axis.kind is AxisKind.THETA:
            return self.theta(axis.angle)
        return builders[axis.kind]()


@lru_cache(maxsize=512)
def _cached_spin(axis: SpinAxis, d: int, dimension: int) -> SparseOperator:
    return SpinFamily(d, TruncatedFockSpace(dimension)).build(axis)


def build_spin(axis: Union[SpinAxis, AxisKind, str], d: int, space: TruncatedFockSpace) -> SparseOperator:
    """
    d-그룹 의사스핀 연산자 생성

    Args:
        axis: Z, X, Y, PLUS, MINUS 또는 SpinAxis.theta(θ)
        d: 그룹 크기 (2d | M)
        space: 절단 공간

    Returns:
        절단 기저 위의 SparseOperator

    Raises:
        TruncationError: 2d ∤ M
    """
    return _cached_spin(SpinAxis.parse(axis), require_positive_int(d, 'd'), space.dimension)


def commutator(A: SparseOperator, B: SparseOperator) -> SparseOperator:
    """[A, B] = AB − BA"""
    if A.dimension != B.dimension:
        raise DimensionMismatchError(f"차원 불일치: {A.dimension} ≠ {B.dimension}")
    return A @ B - B @ A


@dataclass
class SpinAlgebraReport:
    """스핀 대수 검증 결과 (항등식별 최대 절대 잔차)"""
    d: int
    dimension: int
    residuals: Dict[str, float] = field(default_factory=dict)
    tolerance: float = IDENTITY_TOLERANCE

    @property
    def failed(self) -> List[str]:
        return [name for name, value in self.residuals.items() if value > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failed

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0


def verify_spin_algebra(d: int, space: TruncatedFockSpace) -> SpinAlgebraReport:
    """
    절단 공간 위에서 스핀-1/2 대수 항등식 검증

    - [s_z, s_±] = ±2 s_±
    - [s_+, s_−] = s_z
    - s_x² = s_y² = s_z² = I
    - s_θ² = I (θ ∈ [0, 2π) 등간격 8개)

    실패는 예외가 아니라 report.failed 로 보고한다.
    """
    family = SpinFamily(d, space)
    z, plus, minus = family.z(), family.plus(), family.minus()
    x, y = family.x(), family.y()
    identity = SparseOperator.identity(space.dimension)

    residuals = {
        '[z,+] = 2+': (commutator(z, plus) - plus * 2).max_abs(),
        '[z,-] = -2-': (commutator(z, minus) + minus * 2).max_abs(),
        '[+,-] = z': (commutator(plus, minus) - z).max_abs(),
        'x^2 = I': (x @ x - identity).max_abs(),
        'y^2 = I': (y @ y - identity).max_abs(),
        'z^2 = I': (z @ z - identity).max_abs(),
    }
    theta_residual = 0.0
    for angle in np.arange(THETA_SAMPLES) * (2 * math.pi / THETA_SAMPLES):
        s_theta = family.theta(float(angle))
        theta_residual = max(theta_residual, (s_theta @ s_theta - identity).max_abs())
    residuals['theta^2 = I'] = theta_residual

    report = SpinAlgebraReport(d=d, dimension=space.dimension, residuals=residuals)
    if not report.passed:
        logger.warning(f"스핀 대수 항등식 실패 (d={d}, M={space.dimension}): {report.failed}")
    return report


@dataclass
class HierarchyReport:
    """교환 계층 검증 결과"""
    max_k: int
    dimension: int
    axes: Tuple[str, ...]
    pairs_checked: int = 0
    max_residual: float = 0.0
    nonzero_pairs: List[Tuple[str, int, str, int]] = field(default_factory=list)
    tolerance: float = IDENTITY_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def verify_hierarchy(max_k: int, space: TruncatedFockSpace,
                     axes: Sequence[str] = ('x', 'y', 'z')) -> HierarchyReport:
    """
    서로 다른 계층 j ≠ k ≤ max_k 의 모든 축 조합 [s_{a,2^j}, s_{b,2^k}] = 0 검증

    레벨 쌍 (j < k) 마다 모든 순서쌍 축 (a, b) 를 검사한다.
    """
    if not space.supports_grouping(2 ** max_k):
        raise TruncationError(f"2^(max_k+1)={2 ** (max_k + 1)} 이 M={space.dimension} 을 나누지 않습니다")
    axes = tuple(AxisKind(a).value for a in axes)
    operators = {
        (a, k): build_spin(a, 2 ** k, space)
        for a in axes for k in range(max_k + 1)
    }
    report = HierarchyReport(max_k=max_k, dimension=space.dimension, axes=axes)
    for j in range(max_k + 1):
        for k in range(j + 1, max_k + 1):
            for a in axes:
                for b in axes:
                    residual = commutator(operators[(a, j)], operators[(b, k)]).max_abs()
                    report.pairs_checked += 1
                    report.max_residual = max(report.max_residual, residual)
                    if residual > report.tolerance:
                        report.nonzero_pairs.append((a, j, b, k))
    if not report.passed:
        logger.warning(f"교환 계층 위반: {report.nonzero_pairs}")
    return report
