"""
비트-큐비트 대응과 절단 수 연산자

- s_{z,2^k} = 1 − 2 b_k  (b_k = n 의 k번째 비트)
- n_{basis,d} = Σ_{k<d} 2^k (1 − s_{basis,2^k}) / 2
- |m_x⟩ = Σ_n (−1)^{N(m∧n)} |n_z⟩
- |m_y⟩ = Σ_n (−1)^{N(m∧n)} i^{N(n)} |n_z⟩
- 양자 XOR: b ⊕ b' = b + b' − 2 b b'  (비가환)

N(·) 은 popcount (설정된 비트 수).

Author: GNJz (Qquarts)
Version: 1.0.0
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from ..core.exceptions import DimensionMismatchError, InvalidParameterError, TruncationError
from ..core.fock_space import (
    SchmidtState,
    SparseOperator,
    StateVector,
    TruncatedFockSpace,
    apply,
    basis_state,
    nopa_coefficients,
    schmidt_expectation,
    tensor,
)
from ..utils.input_validator import require_angle, require_nonnegative_int, require_positive_int
from .pseudospin import AxisKind, SpinAxis, build_spin

logger = logging.getLogger(__name__)

BIT_TOLERANCE = 1e-12

# SWAR popcount 마스크 (64비트)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)

# i^p, p mod 4
_I_POWERS = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def popcount(values) -> np.ndarray:
    """설정된 비트 수 (0 ≤ 값 < 2^63, 벡터화)"""
    x = np.asarray(values, dtype=np.uint64)
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return ((x * _H01) >> np.uint64(56)).astype(np.int64)


class BasisKind(str, Enum):
    Z = "z"
    X = "x"
    Y = "y"
    THETA = "theta"


@dataclass(frozen=True)
class NumberBasis:
    """수 연산자 측정 기저"""
    kind: BasisKind
    angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', BasisKind(self.kind))
        if self.kind is BasisKind.THETA:
            object.__setattr__(self, 'angle', require_angle(self.angle, 'theta'))
        else:
            object.__setattr__(self, 'angle', 0.0)

    @classmethod
    def theta(cls, angle: float) -> 'NumberBasis':
        return cls(BasisKind.THETA, angle)

    @classmethod
    def parse(cls, basis: Union['NumberBasis', BasisKind, str]) -> 'NumberBasis':
        if isinstance(basis, NumberBasis):
            return basis
        return cls(BasisKind(basis))

    def spin_axis(self) -> SpinAxis:
        if self.kind is BasisKind.THETA:
            return SpinAxis.theta(self.angle)
        return SpinAxis(AxisKind(self.kind.value))


def _require_bit(k: int, space: TruncatedFockSpace) -> int:
    k = require_nonnegative_int(k, 'k')
    if not space.supports_grouping(2 ** k):
        raise TruncationError(f"비트 k={k} 는 M={space.dimension} 을 초과합니다 (2^(k+1) | M 필요)")
    return k


def bit_operator(basis: Union[NumberBasis, str], k: int, space: TruncatedFockSpace) -> SparseOperator:
    """
    k번째 비트 연산자 b_k = (I − s_{basis,2^k}) / 2  (사영 연산자, b² = b)
    """
    k = _require_bit(k, space)
    spin = build_spin(NumberBasis.parse(basis).spin_axis(), 2 ** k, space)
    return (SparseOperator.identity(space.dimension) - spin) * 0.5


def truncated_number_operator(basis: Union[NumberBasis, str], d: int, space: TruncatedFockSpace) -> SparseOperator:
    """
    d 비트에서 절단한 수 연산자 n_{basis,d} = Σ_{k<d} 2^k b_k

    Z 기저에서는 대각값 n mod 2^d. 스펙트럼 {0, …, 2^d − 1}.
    """
    d = require_positive_int(d, 'd')
    if 2 ** d > space.dimension:
        raise TruncationError(f"2^d={2 ** d} > M={space.dimension}")
    basis = NumberBasis.parse(basis)
    total = SparseOperator.zeros(space.dimension)
    for k in range(d):
        total = total + bit_operator(basis, k, space) * (2 ** k)
    return total


def number_spectrum(basis: Union[NumberBasis, str], d: int, space: TruncatedFockSpace) -> np.ndarray:
    """n_{basis,d} 의 정렬된 고유값 (조밀 대각화)"""
    eigenvalues = truncated_number_operator(basis, d, space).eigenvalues()
    return np.sort(np.real(eigenvalues))


@dataclass(frozen=True)
class EigenCoeffVector:
    """
    |m_x⟩ / |m_y⟩ 의 절단 계수 (비정규화, ⟨0_z|m⟩ = 1)
    """
    m: int
    basis: str
    coefficients: np.ndarray
    space: TruncatedFockSpace

    def __post_init__(self):
        if self.basis not in ('x', 'y'):
            raise InvalidParameterError(f"basis는 'x' 또는 'y' 이어야 합니다: {self.basis!r}")
        coeffs = np.array(self.coefficients, dtype=np.complex128)
        if coeffs[0] != 1:
            raise InvalidParameterError("⟨0_z|m⟩ = 1 정규화 조건 위반")
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coefficients', coeffs)

    def to_state(self) -> StateVector:
        """비정규화 상태 벡터"""
        return StateVector(self.coefficients, self.space)

    def normalized(self) -> StateVector:
        """단위 노름 절단 벡터 (모든 계수 크기 1 → 1/√M 배)"""
        return StateVector(self.coefficients / np.sqrt(self.space.dimension), self.space, normalized=True)


def _require_label(m: int, space: TruncatedFockSpace) -> int:
    m = require_nonnegative_int(m, 'm')
    if m >= space.dimension:
        raise InvalidParameterError(f"m={m} 은 [0, {space.dimension}) 범위 밖입니다")
    return m


def xbasis_eigenvector(m: int, space: TruncatedFockSpace) -> EigenCoeffVector:
    """|m_x⟩ 계수: (−1)^{N(m∧n)}"""
    m = _require_label(m, space)
    n = np.arange(space.dimension)
    signs = 1 - 2 * (popcount(np.bitwise_and(n, m)) % 2)
    return EigenCoeffVector(m=m, basis='x', coefficients=signs.astype(np.complex128), space=space)


def ybasis_eigenvector(m: int, space: TruncatedFockSpace) -> EigenCoeffVector:
    """|m_y⟩ 계수: (−1)^{N(m∧n)} · i^{N(n)}"""
    m = _require_label(m, space)
    n = np.arange(space.dimension)
    signs = 1 - 2 * (popcount(np.bitwise_and(n, m)) % 2)
    phases = _I_POWERS[popcount(n) % 4]
    return EigenCoeffVector(m=m, basis='y', coefficients=signs * phases, space=space)


def normalized_eigenvector(m: int, basis: str, space: TruncatedFockSpace) -> StateVector:
    """단위 노름 |m_x⟩ 또는 |m_y⟩"""
    builder = {'x': xbasis_eigenvector, 'y': ybasis_eigenvector}.get(basis)
    if builder is None:
        raise InvalidParameterError(f"basis는 'x' 또는 'y' 이어야 합니다: {basis!r}")
    return builder(m, space).normalized()


def is_bit_valued(b: SparseOperator, atol: float = BIT_TOLERANCE) -> bool:
    """b² = b 여부"""
    return (b @ b - b).max_abs() <= atol


def quantum_xor(bA: SparseOperator, bB: SparseOperator) -> SparseOperator:
    """
    양자 XOR: bA + bB − 2 bA bB  (피연산자 순서 보존, 대칭화 안 함)
    """
    if bA.dimension != bB.dimension:
        raise DimensionMismatchError(f"차원 불일치: {bA.dimension} ≠ {bB.dimension}")
    if not (is_bit_valued(bA) and is_bit_valued(bB)):
        raise InvalidParameterError("quantum_xor 피연산자는 비트 값 연산자(b² = b)여야 합니다")
    return bA + bB - (bA @ bB) * 2


def hermitian_part(A: SparseOperator) -> SparseOperator:
    """(A + A†) / 2"""
    return (A + A.adjoint()) * 0.5


@dataclass
class ProductDecompositionReport:
    """N_{z,2} N'_{z,2} 비트 분해 항등식 검증 결과"""
    dimension: int
    residual: float
    cross_term: float
    marginal_product: float
    r: float = 1.0
    tolerance: float = BIT_TOLERANCE

    @property
    def independence_gap(self) -> float:
        return abs(self.cross_term - self.marginal_product)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def product_decomposition_check(space: TruncatedFockSpace, r: float = 1.0) -> ProductDecompositionReport:
    """
    N_{z,2} N'_{z,2} = B₀B'₀ + 4B₁B'₁ + 2(B₀B'₁ + B₁B'₀) 를 M² 텐서곱 공간에서 검증

    추가로 NOPA(r) 에서 교차항 ⟨B₀B'₁⟩ 와 ⟨B₀⟩⟨B'₁⟩ 를 함께 보고한다
    (한쪽 비트 값이 다른 비트에 대한 정보를 주지 않음).
    """
    if space.dimension < 4:
        raise TruncationError(f"M ≥ 4 필요: M={space.dimension}")
    identity = SparseOperator.identity(space.dimension)
    number = truncated_number_operator('z', 2, space)
    b0 = bit_operator('z', 0, space)
    b1 = bit_operator('z', 1, space)

    lhs = tensor(number, identity) @ tensor(identity, number)
    rhs = (
        tensor(b0, b0)
        + tensor(b1, b1) * 4
        + (tensor(b0, b1) + tensor(b1, b0)) * 2
    )
    residual = (lhs - rhs).max_abs()

    state = nopa_coefficients(r, space)
    cross = schmidt_expectation(state, b0, b1).real
    marginals = schmidt_expectation(state, b0, identity).real * schmidt_expectation(state, identity, b1).real

    report = ProductDecompositionReport(
        dimension=space.dimension, residual=residual, cross_term=cross, marginal_product=marginals, r=r,
    )
    if not report.passed:
        logger.warning(f"곱 분해 항등식 잔차 {residual:.3e} (M={space.dimension})")
    return report


def projector_expectation(state: StateVector, projectors: Sequence[SparseOperator]) -> float:
    """⟨ψ| Π P_i |ψ⟩ (교환하는 사영 연산자 곱)"""
    v = state
    for projector in projectors:
        v = apply(projector, v)
    return float(state.inner(v).real)


def vacuum_xbit_block_probability(k: int, L: int, space: TruncatedFockSpace) -> float:
    """
    진공에서 x-비트 k+1..k+L 이 모두 0 일 확률
    ⟨0| Π_{l=k+1}^{k+L} (I + s_{x,2^l}) / 2 |0⟩  (정확값 2^{−L})
    """
    k = require_nonnegative_int(k, 'k')
    L = require_positive_int(L, 'L')
    identity = SparseOperator.identity(space.dimension)
    projectors = [
        (identity + build_spin('x', 2 ** _require_bit(level, space), space)) * 0.5
        for level in range(k + 1, k + L + 1)
    ]
    return projector_expectation(basis_state(0, space), projectors)


def bit_marginal(state: SchmidtState, basis: Union[NumberBasis, str], k: int) -> float:
    """한쪽 부분계의 P(b_k = 1) = ⟨b_k ⊗ I⟩"""
    b = bit_operator(basis, k, state.space)
    return float(schmidt_expectation(state, b, SparseOperator.identity(state.dimension)).real)
