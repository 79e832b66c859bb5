"""
절단 Fock 공간 (Truncated Fock Space)

수 상태 기저 {|0⟩, …, |M−1⟩} 위의 상태 벡터, 희소 연산자, Schmidt 형태 이분 상태
- M = 2^D (기본), D = 비트 깊이
- 모든 연산자는 scipy.sparse CSR 행렬로 저장
- |NOPA⟩ = Σ c_n |n⟩⊗|n⟩, c_n = tanh^n r / cosh r

핵심 아이디어:
- ⟨NOPA|A⊗B|NOPA⟩ = Σ_{m,n} c_m c_n A_mn B_mn
  → M² 차원 텐서곱을 만들지 않고 희소 패턴의 교집합만 합산

Author: GNJz (Qquarts)
Version: 1.0.0
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy import sparse

from .exceptions import DimensionMismatchError, InvalidParameterError
from ..utils.input_validator import require_squeezing

logger = logging.getLogger(__name__)

# 정규화 판정 허용 오차
NORM_TOLERANCE = 1e-12
# 1 − tanh r 가 이보다 작으면 배정밀도에서 계수 비율이 1 로 포화
SATURATION_GAP = 1e-12

# 자동 비트 깊이 선택 기본값
DEFAULT_TAIL_TOLERANCE = 1e-9
MIN_AUTO_DEPTH = 4
MAX_AUTO_DEPTH = 16


@dataclass(frozen=True)
class TruncatedFockSpace:
    """
    절단 Fock 공간

    기본 생성은 from_bit_depth(D) → M = 2^D.
    d-그룹 검증(d=3, M=12 등)을 위해 짝수 M도 허용하며,
    비트/수 연산자는 해당 비트 블록이 M을 나누는지 별도로 검사한다.
    """
    dimension: int

    def __post_init__(self):
        if not isinstance(self.dimension, (int, np.integer)) or isinstance(self.dimension, bool):
            raise InvalidParameterError(f"dimension은 정수여야 합니다: {self.dimension!r}")
        if self.dimension < 2 or self.dimension % 2 != 0:
            raise InvalidParameterError(f"dimension은 2 이상의 짝수여야 합니다: {self.dimension}")
        object.__setattr__(self, 'dimension', int(self.dimension))

    @classmethod
    def from_bit_depth(cls, bit_depth: int) -> 'TruncatedFockSpace':
        """M = 2^D 공간 생성"""
        if not isinstance(bit_depth, (int, np.integer)) or bit_depth < 1:
            raise InvalidParameterError(f"bit_depth는 1 이상의 정수여야 합니다: {bit_depth!r}")
        return cls(dimension=2 ** int(bit_depth))

    @classmethod
    def for_squeezing(cls, r: float, tolerance: float = DEFAULT_TAIL_TOLERANCE) -> 'TruncatedFockSpace':
        """꼬리 가중치 기준 자동 선택 공간"""
        return cls.from_bit_depth(select_bit_depth(r, tolerance=tolerance))

    @property
    def is_binary(self) -> bool:
        """M이 2의 거듭제곱인지"""
        return self.dimension & (self.dimension - 1) == 0

    @property
    def bit_depth(self) -> int:
        """M 안에 완전히 들어가는 비트 수 (2^D ≤ M 인 최대 D)"""
        return self.dimension.bit_length() - 1

    def supports_grouping(self, d: int) -> bool:
        """2d | M 여부"""
        return d >= 1 and self.dimension % (2 * d) == 0


@dataclass(frozen=True)
class StateVector:
    """
    상태 벡터 (진폭, 공간, 정규화 플래그)

    normalized=True 이면 | ‖ψ‖₂ − 1 | ≤ 1e-12 를 생성 시 검사한다.
    """
    amplitudes: np.ndarray
    space: TruncatedFockSpace
    normalized: bool = False

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.space.dimension:
            raise DimensionMismatchError(
                f"진폭 길이 {amps.shape[0]} ≠ 공간 차원 {self.space.dimension}"
            )
        if not np.all(np.isfinite(amps)):
            raise InvalidParameterError("진폭에 NaN/Inf가 포함되어 있습니다")
        if self.normalized and abs(np.linalg.norm(amps) - 1.0) > NORM_TOLERANCE:
            raise InvalidParameterError(
                f"normalized 플래그와 노름 불일치: ‖ψ‖ = {np.linalg.norm(amps):.15f}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amps)

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: 'StateVector') -> complex:
        """⟨self|other⟩"""
        _require_same_dimension(self.dimension, other.dimension)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def normalize(self) -> 'StateVector':
        norm = self.norm()
        if norm == 0.0:
            raise InvalidParameterError("영 벡터는 정규화할 수 없습니다")
        return StateVector(self.amplitudes / norm, self.space, normalized=True)

    def __add__(self, other: 'StateVector') -> 'StateVector':
        _require_same_dimension(self.dimension, other.dimension)
        return StateVector(self.amplitudes + other.amplitudes, self.space)

    def __mul__(self, scalar: complex) -> 'StateVector':
        return StateVector(self.amplitudes * scalar, self.space)

    __rmul__ = __mul__


def basis_state(n: int, space: TruncatedFockSpace) -> StateVector:
    """수 상태 |n⟩"""
    if not 0 <= n < space.dimension:
        raise InvalidParameterError(f"n={n} 은 [0, {space.dimension}) 범위 밖입니다")
    amps = np.zeros(space.dimension, dtype=np.complex128)
    amps[n] = 1.0
    return StateVector(amps, space, normalized=True)


class SparseOperator:
    """
    절단 공간 위의 복소 희소 연산자

    내부 표현은 CSR (정렬, 중복 합산, 명시적 0 제거).
    생성 후 불변으로 취급한다 (연산은 항상 새 객체를 반환).
    """

    __slots__ = ('_matrix',)

    def __init__(self, matrix):
        mat = sparse.csr_matrix(matrix, dtype=np.complex128, copy=True)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionMismatchError(f"정방 행렬이 아닙니다: shape={mat.shape}")
        mat.sum_duplicates()
        mat.eliminate_zeros()
        mat.sort_indices()
        self._matrix = mat

    # ------------------------------------------------------------------
    # 생성자
    # ------------------------------------------------------------------
    @classmethod
    def from_entries(cls, entries: Iterable[Tuple[int, int, complex]], dimension: int) -> 'SparseOperator':
        """(row, col, value) 삼중항으로 생성; 범위 밖 / 중복 (row, col)은 오류"""
        rows: List[int] = []
        cols: List[int] = []
        values: List[complex] = []
        seen = set()
        for row, col, value in entries:
            if not (0 <= row < dimension and 0 <= col < dimension):
                raise DimensionMismatchError(f"항목 ({row}, {col}) 이 차원 {dimension} 밖입니다")
            if (row, col) in seen:
                raise InvalidParameterError(f"중복 항목 ({row}, {col})")
            seen.add((row, col))
            rows.append(row)
            cols.append(col)
            values.append(value)
        mat = sparse.coo_matrix(
            (np.asarray(values, dtype=np.complex128), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
            shape=(dimension, dimension),
        )
        return cls(mat)

    @classmethod
    def identity(cls, dimension: int) -> 'SparseOperator':
        return cls(sparse.identity(dimension, dtype=np.complex128, format='csr'))

    @classmethod
    def zeros(cls, dimension: int) -> 'SparseOperator':
        return cls(sparse.csr_matrix((dimension, dimension), dtype=np.complex128))

    @classmethod
    def diagonal(cls, values) -> 'SparseOperator':
        values = np.asarray(values, dtype=np.complex128)
        return cls(sparse.diags(values, format='csr'))

    # ------------------------------------------------------------------
    # 속성
    # ------------------------------------------------------------------
    @property
    def matrix(self) -> sparse.csr_matrix:
        return self._matrix

    @property
    def dimension(self) -> int:
        return self._matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self._matrix.nnz

    def entries(self) -> List[Tuple[int, int, complex]]:
        """행 우선 정렬된 (row, col, value) 목록"""
        coo = self._matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[i]), int(coo.col[i]), complex(coo.data[i])) for i in order]

    def to_dense(self) -> np.ndarray:
        return self._matrix.toarray()

    # ------------------------------------------------------------------
    # 대수 연산
    # ------------------------------------------------------------------
    def __add__(self, other: 'SparseOperator') -> 'SparseOperator':
        _require_same_dimension(self.dimension, other.dimension)
        return SparseOperator(self._matrix + other._matrix)

    def __sub__(self, other: 'SparseOperator') -> 'SparseOperator':
        _require_same_dimension(self.dimension, other.dimension)
        return SparseOperator(self._matrix - other._matrix)

    def __neg__(self) -> 'SparseOperator':
        return SparseOperator(-self._matrix)

    def __mul__(self, scalar: complex) -> 'SparseOperator':
        if isinstance(scalar, SparseOperator):
            raise TypeError("연산자 곱은 @ 를 사용하세요")
        return SparseOperator(self._matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: 'SparseOperator') -> 'SparseOperator':
        _require_same_dimension(self.dimension, other.dimension)
        return SparseOperator(self._matrix @ other._matrix)

    def adjoint(self) -> 'SparseOperator':
        return SparseOperator(self._matrix.conj().T)

    # ------------------------------------------------------------------
    # 비교
    # ------------------------------------------------------------------
    def max_abs(self) -> float:
        if self._matrix.nnz == 0:
            return 0.0
        return float(np.max(np.abs(self._matrix.data)))

    def equals(self, other: 'SparseOperator', atol: float = 0.0) -> bool:
        """atol=0 이면 구조적 정확 일치"""
        return (self - other).max_abs() <= atol

    def is_zero(self, atol: float = 0.0) -> bool:
        return self.max_abs() <= atol

    def is_hermitian(self, atol: float = 0.0) -> bool:
        return self.equals(self.adjoint(), atol=atol)

    def eigenvalues(self) -> np.ndarray:
        """조밀 대각화 (검증용 오라클, 작은 M 전용)"""
        dense = self.to_dense()
        if self.is_hermitian(atol=1e-12):
            return np.linalg.eigvalsh(dense)
        return np.sort_complex(np.linalg.eigvals(dense))

    def __repr__(self) -> str:
        return f"SparseOperator(dimension={self.dimension}, nnz={self.nnz})"


@dataclass(frozen=True)
class SchmidtState:
    """
    Schmidt 형태 이분 상태 Σ c_n |n⟩⊗|n⟩

    Attributes:
        coefficients: 실수 계수 c_n (길이 M)
        space: 한쪽 부분계의 절단 공간
        r: 스퀴징 파라미터
        tail_weight: 절단 밖 확률 질량 tanh^{2M} r
        normalized: Σ c_n² = 1 (1e-12 이내) 여부
    """
    coefficients: np.ndarray
    space: TruncatedFockSpace
    r: float = 0.0
    tail_weight: float = 0.0
    normalized: bool = True
    raw_weight: float = field(default=1.0)

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=np.float64).reshape(-1)
        if coeffs.shape[0] != self.space.dimension:
            raise DimensionMismatchError(
                f"계수 길이 {coeffs.shape[0]} ≠ 공간 차원 {self.space.dimension}"
            )
        if np.any(coeffs < 0) or not np.all(np.isfinite(coeffs)):
            raise InvalidParameterError("Schmidt 계수는 유한한 비음수여야 합니다")
        saturated = self.r > 0 and 1.0 - float(np.tanh(self.r)) < SATURATION_GAP
        if self.r > 0 and np.any(np.diff(coeffs) > 0):
            raise InvalidParameterError("r > 0 에서 Schmidt 계수는 감소해야 합니다")
        # 언더플로(비정규수 이하) 구간의 동률은 허용
        resolvable = coeffs[1:] >= np.finfo(np.float64).tiny
        if self.r > 0 and not saturated and np.any((np.diff(coeffs) == 0) & resolvable):
            raise InvalidParameterError("r > 0 에서 Schmidt 계수는 순감소해야 합니다")
        upper_ok = self.tail_weight <= 1.0 if saturated else self.tail_weight < 1.0
        if not (0.0 <= self.tail_weight and upper_ok):
            raise InvalidParameterError(f"tail_weight 범위 오류: {self.tail_weight}")
        if self.normalized and abs(float(np.sum(coeffs ** 2)) - 1.0) > NORM_TOLERANCE:
            raise InvalidParameterError("normalized 플래그와 Σc² 불일치")
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coefficients', coeffs)

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def probabilities(self) -> np.ndarray:
        """수 측정 분포 P(n) = c_n²"""
        return self.coefficients ** 2

    def to_vector(self) -> np.ndarray:
        """M² 차원 조밀 벡터 (검증용)"""
        psi = np.zeros(self.dimension ** 2, dtype=np.complex128)
        idx = np.arange(self.dimension)
        psi[idx * self.dimension + idx] = self.coefficients
        return psi


# ----------------------------------------------------------------------
# NOPA 계수
# ----------------------------------------------------------------------

def _log_tanh(r: float) -> float:
    """log tanh r (r > 0), 큰 r 에서도 정확"""
    return float(np.log1p(-2.0 / (np.exp(2.0 * r) + 1.0)))


def _log_cosh(r: float) -> float:
    return float(r + np.log1p(np.exp(-2.0 * r)) - np.log(2.0))


def nopa_tail_weight(r: float, dimension: int) -> float:
    """절단 밖 확률 질량 tanh^{2M} r"""
    r = require_squeezing(r)
    if r == 0.0:
        return 0.0
    return float(np.exp(2.0 * dimension * _log_tanh(r)))


def nopa_coefficients(r: float, space: TruncatedFockSpace, renormalize: bool = True) -> SchmidtState:
    """
    |NOPA⟩ 계수 c_n = tanh^n r / cosh r (n = 0..M−1)

    Args:
        r: 스퀴징 파라미터 (유한, ≥ 0)
        space: 절단 공간
        renormalize: True 이면 단위 2-노름으로 재정규화 (샘플링 기본값)

    Returns:
        SchmidtState (tail_weight = tanh^{2M} r 은 재정규화와 무관하게 정확값)
    """
    r = require_squeezing(r)
    M = space.dimension
    n = np.arange(M, dtype=np.float64)

    if r == 0.0:
        raw = np.zeros(M)
        raw[0] = 1.0
        tail = 0.0
    else:
        log_t = _log_tanh(r)
        steps = n * log_t if np.isfinite(log_t) else np.where(n == 0, 0.0, -np.inf)
        raw = np.exp(-_log_cosh(r)) * np.exp(steps)
        tail = float(np.exp(2.0 * M * log_t))

    raw_weight = float(np.sum(raw ** 2))
    if renormalize:
        coeffs = raw / np.sqrt(raw_weight)
    else:
        coeffs = raw

    logger.debug(f"NOPA 계수: r={r}, M={M}, tail_weight={tail:.3e}, renormalize={renormalize}")
    return SchmidtState(
        coefficients=coeffs,
        space=space,
        r=r,
        tail_weight=tail,
        normalized=renormalize or r == 0.0,
        raw_weight=raw_weight,
    )


def tail_identity_residual(r: float, space: TruncatedFockSpace) -> float:
    """| Σ_{n<M} tanh^{2n}r / cosh²r + tanh^{2M} r − 1 |"""
    state = nopa_coefficients(r, space, renormalize=False)
    return abs(state.raw_weight + state.tail_weight - 1.0)


def select_bit_depth(r: float,
                     tolerance: float = DEFAULT_TAIL_TOLERANCE,
                     min_depth: int = MIN_AUTO_DEPTH,
                     max_depth: int = MAX_AUTO_DEPTH) -> int:
    """
    tanh^{2·2^D} r ≤ tolerance 를 만족하는 최소 D (범위 [min_depth, max_depth])

    만족하는 D가 없으면 max_depth 를 반환하고 경고를 남긴다.
    """
    r = require_squeezing(r)
    for depth in range(min_depth, max_depth + 1):
        if nopa_tail_weight(r, 2 ** depth) <= tolerance:
            logger.info(f"비트 깊이 자동 선택: r={r} → D={depth}")
            return depth
    logger.warning(
        f"r={r} 에서 꼬리 가중치 {nopa_tail_weight(r, 2 ** max_depth):.3e} > {tolerance:.1e}; D={max_depth} 사용"
    )
    return max_depth


# ----------------------------------------------------------------------
# 기댓값 / 적용
# ----------------------------------------------------------------------

def schmidt_expectation(state: SchmidtState, A: SparseOperator, B: SparseOperator) -> complex:
    """
    ⟨ψ|A⊗B|ψ⟩ = Σ_{m,n} c_m c_n A_mn B_mn

    두 희소 패턴의 교집합만 합산한다 (텐서곱 미생성).
    """
    _require_same_dimension(state.dimension, A.dimension)
    _require_same_dimension(state.dimension, B.dimension)
    overlap = A.matrix.multiply(B.matrix).tocoo()
    c = state.coefficients
    return complex(np.sum(overlap.data * c[overlap.row] * c[overlap.col]))


def tensor(A: SparseOperator, B: SparseOperator) -> SparseOperator:
    """A ⊗ B (M² 차원)"""
    return SparseOperator(sparse.kron(A.matrix, B.matrix, format='csr'))


def tensor_expectation(state: SchmidtState, A: SparseOperator, B: SparseOperator) -> complex:
    """조밀 텐서곱으로 계산한 ⟨ψ|A⊗B|ψ⟩ (schmidt_expectation 검증용 오라클)"""
    _require_same_dimension(state.dimension, A.dimension)
    _require_same_dimension(state.dimension, B.dimension)
    psi = state.to_vector()
    return complex(np.vdot(psi, tensor(A, B).matrix @ psi))


def apply(op: SparseOperator, v: StateVector) -> StateVector:
    """정확한 희소 행렬-벡터 곱"""
    _require_same_dimension(op.dimension, v.dimension)
    return StateVector(op.matrix @ v.amplitudes, v.space)


def expectation(v: StateVector, op: SparseOperator) -> complex:
    """⟨v|op|v⟩"""
    return v.inner(apply(op, v))


def _require_same_dimension(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"차원 불일치: {a} ≠ {b}")
