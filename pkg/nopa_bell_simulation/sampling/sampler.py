"""
Monte Carlo 결합 측정 샘플러

절단 NOPA 상태에서 양쪽 부분계의 결합 측정을 시뮬레이션한다.

- 스핀 측정: s_{θ,d} ⊗ I, I ⊗ s'_{θ',d} → 결과 (a, b) ∈ {±1}²
- 수 측정: 비트 0..d−1 을 동시에 측정 → 결과 (N, N'), N = Σ 2^k B_k

확률표를 한 번 계산한 뒤 multinomial 로 개수를 뽑는다.
배치 크기는 shots 에만 의존하므로 결과는 스레드 수와 무관하다.

Author: GNJz (Qquarts)
Version: 1.0.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from ..analysis.bell import (
    AngleSet,
    BellKind,
    BellReport,
    analytic_bell,
    chsh_functional,
    kind_weights,
    xor_functional,
)
from ..analysis.correlations import CorrelationQuery, analytic_correlation
from ..core.exceptions import ConsistencyError, InvalidParameterError, TruncationError
from ..core.fock_space import SchmidtState, SparseOperator, TruncatedFockSpace, nopa_coefficients, schmidt_expectation
from ..operators.number_bits import NumberBasis, bit_operator, popcount
from ..operators.pseudospin import SpinAxis, build_spin
from ..utils.input_validator import InputValidator, require_positive_int, require_squeezing
from ..utils.parallel import parallel_map
from ..utils.reproducibility import ReproducibleRNG, require_seed
from ..utils.statistics import (
    SeedSweepStatistics,
    ConvergenceFit,
    correlation_standard_error,
    fit_convergence,
    histogram_moments,
    propagate_standard_error,
)

logger = logging.getLogger(__name__)

# 배치 크기 (고정)
BATCH_SIZE = 100_000

# 음수 확률 허용치, 확률 합 허용치
NEGATIVE_TOLERANCE = 1e-12
COMPLETENESS_TOLERANCE = 1e-10

# 결합 확률표 최대 크기 (2^{2d})
TABLE_LIMIT = 2 ** 16


@dataclass(frozen=True)
class SpinSetting:
    """s_{θ,d} 측정"""
    angle: float
    d: int = 1

    def operator(self, space: TruncatedFockSpace) -> SparseOperator:
        return build_spin(SpinAxis.theta(self.angle), self.d, space)

    def check(self, space: TruncatedFockSpace):
        if not space.supports_grouping(self.d):
            raise TruncationError(f"2d={2 * self.d} 가 M={space.dimension} 을 나누지 않습니다")


@dataclass(frozen=True)
class NumberSetting:
    """기저 basis 에서 비트 0..bits−1 결합 측정"""
    basis: NumberBasis
    bits: int

    def __post_init__(self):
        object.__setattr__(self, 'basis', NumberBasis.parse(self.basis))
        require_positive_int(self.bits, 'bits')

    def check(self, space: TruncatedFockSpace):
        if space.dimension % (2 ** self.bits) != 0:
            raise TruncationError(f"2^bits={2 ** self.bits} 가 M={space.dimension} 을 나누지 않습니다")

    def bit_projectors(self, space: TruncatedFockSpace) -> List[Tuple[SparseOperator, SparseOperator]]:
        """비트별 (B_k = 0 사영, B_k = 1 사영)"""
        identity = SparseOperator.identity(space.dimension)
        result = []
        for k in range(self.bits):
            one = bit_operator(self.basis, k, space)
            result.append((identity - one, one))
        return result


Setting = Union[SpinSetting, NumberSetting]


@dataclass(frozen=True)
class MeasurementPlan:
    """
    결합 측정 계획

    Attributes:
        side_a / side_b: 같은 종류의 측정 설정
        r: 스퀴징
        space: 절단 공간 (상태는 항상 재정규화)
        shots: 샘플 수 (≥ 1)
        seed: 64비트 시드
    """
    side_a: Setting
    side_b: Setting
    r: float
    space: TruncatedFockSpace
    shots: int
    seed: int

    def __post_init__(self):
        if type(self.side_a) is not type(self.side_b):
            raise InvalidParameterError("양쪽 측정 설정의 종류가 다릅니다")
        object.__setattr__(self, 'r', require_squeezing(self.r))
        object.__setattr__(self, 'shots', require_positive_int(self.shots, 'shots'))
        object.__setattr__(self, 'seed', require_seed(self.seed))
        if self.shots > InputValidator.MAX_SHOTS:
            raise InvalidParameterError(f"shots는 {InputValidator.MAX_SHOTS} 이하여야 합니다")
        self.side_a.check(self.space)
        self.side_b.check(self.space)

    @property
    def is_spin(self) -> bool:
        return isinstance(self.side_a, SpinSetting)

    def state(self) -> SchmidtState:
        return nopa_coefficients(self.r, self.space, renormalize=True)


@dataclass
class SampleBatch:
    """
    샘플링 결과

    outcomes[i] = (a, b) 결합 결과, counts[i] = 개수 (합 = shots)
    """
    outcomes: np.ndarray
    counts: np.ndarray
    shots: int
    seed: int
    bits: Optional[int] = None
    meta: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self.outcomes = np.asarray(self.outcomes, dtype=np.int64).reshape(-1, 2)
        self.counts = np.asarray(self.counts, dtype=np.int64).reshape(-1)
        if self.outcomes.shape[0] != self.counts.shape[0]:
            raise ConsistencyError("결과와 개수의 길이가 다릅니다")
        if np.any(self.counts < 0) or int(self.counts.sum()) != self.shots:
            raise ConsistencyError(f"개수 합 {int(self.counts.sum())} ≠ shots {self.shots}")

    @property
    def histogram(self) -> Dict[Tuple[int, int], int]:
        """0 이 아닌 결합 결과 → 개수"""
        return {
            (int(a), int(b)): int(c)
            for (a, b), c in zip(self.outcomes, self.counts) if c > 0
        }

    def correlation(self) -> float:
        """스핀 결과의 E = ⟨a b⟩"""
        products = self.outcomes[:, 0] * self.outcomes[:, 1]
        return float(np.dot(products, self.counts) / self.shots)

    def correlation_error(self) -> float:
        return correlation_standard_error(self.correlation(), self.shots)

    def xor_values(self, weights: Sequence[float]) -> np.ndarray:
        """결과별 Σ_k w_k bit_k(N ⊕ N')"""
        weights = np.asarray(weights, dtype=np.float64)
        xor = np.bitwise_xor(self.outcomes[:, 0], self.outcomes[:, 1])
        values = np.zeros(len(xor))
        for k, w in enumerate(weights):
            if w:
                values += w * ((xor >> k) & 1)
        return values

    def weighted_xor_mean(self, weights: Sequence[float]) -> Tuple[float, float]:
        """(평균, 평균의 표준오차)"""
        moments = histogram_moments(self.xor_values(weights), self.counts)
        return moments['mean'], moments['standard_error']

    def hamming_mean(self) -> float:
        """평균 Hamming 거리 N(N ⊕ N')"""
        xor = np.bitwise_xor(self.outcomes[:, 0], self.outcomes[:, 1])
        return float(np.dot(popcount(xor), self.counts) / self.shots)

    def number_xor_mean(self) -> float:
        """비트별 XOR 를 수로 읽은 평균 ⟨N ⊕ N'⟩"""
        xor = np.bitwise_xor(self.outcomes[:, 0], self.outcomes[:, 1])
        return float(np.dot(xor, self.counts) / self.shots)


# ----------------------------------------------------------------------
# 확률표
# ----------------------------------------------------------------------

def _validate_probabilities(probabilities: np.ndarray, context: str) -> np.ndarray:
    """음수 검사 / 클램프 / 합 검사"""
    probabilities = np.asarray(probabilities, dtype=np.float64)
    worst = float(probabilities.min()) if probabilities.size else 0.0
    if worst < -NEGATIVE_TOLERANCE:
        raise ConsistencyError(f"{context}: 음수 확률 {worst:.3e}")
    if worst < 0:
        logger.debug(f"{context}: 음수 확률 {worst:.3e} 을 0 으로 클램프")
        probabilities = np.clip(probabilities, 0.0, None)
    total = float(probabilities.sum())
    if abs(total - 1.0) > COMPLETENESS_TOLERANCE:
        raise ConsistencyError(f"{context}: 확률 합 {total:.15f} ≠ 1")
    return probabilities


def spin_outcome_table(plan: MeasurementPlan) -> Tuple[np.ndarray, np.ndarray]:
    """
    스핀 결합 확률 p(a, b) = ⟨ψ| P_a ⊗ Q_b |ψ⟩, P_a = (I + a s)/2

    Returns:
        (outcomes (4, 2), probabilities (4,))
    """
    state = plan.state()
    identity = SparseOperator.identity(plan.space.dimension)
    A = plan.side_a.operator(plan.space)
    B = plan.side_b.operator(plan.space)
    outcomes, probabilities = [], []
    for a in (1, -1):
        P = (identity + A * a) * 0.5
        for b in (1, -1):
            Q = (identity + B * b) * 0.5
            outcomes.append((a, b))
            probabilities.append(schmidt_expectation(state, P, Q).real)
    return np.array(outcomes), _validate_probabilities(np.array(probabilities), "스핀 확률표")


def _number_projectors(setting: NumberSetting, space: TruncatedFockSpace) -> List[SparseOperator]:
    """N = 0..2^bits−1 의 결합 사영 연산자 Π_N = Π_k P_k(bit_k N)"""
    per_bit = setting.bit_projectors(space)
    projectors = [SparseOperator.identity(space.dimension)]
    for k in range(setting.bits):
        zero, one = per_bit[k]
        # 새 비트 k 를 상위 자리로 붙임: N = prefix + 2^k · bit
        projectors = [p @ zero for p in projectors] + [p @ one for p in projectors]
    return projectors


def _state_matrix(state: SchmidtState) -> sparse.csr_matrix:
    """|ψ⟩ = Σ Ψ_mn |m⟩|n⟩ 의 계수 행렬 Ψ = diag(c)"""
    return sparse.diags(state.coefficients.astype(np.complex128), format='csr')


def _branch_weight(phi: sparse.spmatrix) -> float:
    """‖Φ‖_F²"""
    data = phi.tocsr().data
    return float(np.sum(np.abs(data) ** 2))


def number_outcome_table(plan: MeasurementPlan) -> Tuple[np.ndarray, np.ndarray]:
    """
    수 결합 확률 p(N, N') = ‖Π_N Ψ Π'_{N'}ᵀ‖_F² (2^{2·bits} 개 전체)

    Returns:
        (outcomes (K, 2), probabilities (K,)), N 우선 정렬
    """
    if plan.is_spin:
        raise InvalidParameterError("number_outcome_table 에는 NumberSetting 이 필요합니다")
    size = 2 ** (plan.side_a.bits + plan.side_b.bits)
    if size > TABLE_LIMIT:
        raise InvalidParameterError(f"확률표 크기 {size} > {TABLE_LIMIT}; 순차 붕괴를 사용하세요")
    psi = _state_matrix(plan.state())
    left = [p.matrix @ psi for p in _number_projectors(plan.side_a, plan.space)]
    right = [p.matrix.T.tocsr() for p in _number_projectors(plan.side_b, plan.space)]
    outcomes, probabilities = [], []
    for N, L in enumerate(left):
        for N2, R in enumerate(right):
            outcomes.append((N, N2))
            probabilities.append(_branch_weight(L @ R))
    return np.array(outcomes), _validate_probabilities(np.array(probabilities), "수 확률표")


def _collapse_operators(plan: MeasurementPlan):
    a_bits = plan.side_a.bit_projectors(plan.space)
    b_bits = [(z.matrix.T.tocsr(), o.matrix.T.tocsr()) for z, o in plan.side_b.bit_projectors(plan.space)]
    return a_bits, b_bits


def sequential_outcome_distribution(plan: MeasurementPlan) -> Dict[Tuple[int, int], float]:
    """
    비트 k = 0..d−1 순차 사영 붕괴로 얻은 정확한 결합 분포

    각 단계에서 (B_k, B'_k) 네 갈래의 확률을 남은 상태의 노름으로 나눈다.
    확률 0 갈래는 잘라낸다.
    """
    if plan.is_spin:
        raise InvalidParameterError("sequential_outcome_distribution 에는 NumberSetting 이 필요합니다")
    a_bits, b_bits = _collapse_operators(plan)
    depth = plan.side_a.bits
    distribution: Dict[Tuple[int, int], float] = {}

    def descend(phi, k, n_a, n_b, weight):
        if k == depth:
            distribution[(n_a, n_b)] = distribution.get((n_a, n_b), 0.0) + weight
            return
        for beta in (0, 1):
            for beta2 in (0, 1):
                child = a_bits[k][beta].matrix @ phi @ b_bits[k][beta2]
                w = _branch_weight(child)
                if w > 0.0:
                    descend(child, k + 1, n_a | (beta << k), n_b | (beta2 << k), w)

    descend(_state_matrix(plan.state()), 0, 0, 0, 1.0)
    _validate_probabilities(np.array(list(distribution.values())), "순차 붕괴 분포")
    return distribution


# ----------------------------------------------------------------------
# 샘플링
# ----------------------------------------------------------------------

def _batch_sizes(shots: int) -> List[int]:
    full, rest = divmod(shots, BATCH_SIZE)
    return [BATCH_SIZE] * full + ([rest] if rest else [])


def _multinomial_counts(probabilities: np.ndarray, shots: int, seed: int,
                        threads: Optional[int] = None) -> np.ndarray:
    """배치별 독립 스트림으로 multinomial 개수를 뽑아 합산"""
    rng = ReproducibleRNG(seed)
    p = probabilities / probabilities.sum()
    sizes = _batch_sizes(shots)
    batches = parallel_map(lambda i: rng.substream(i).multinomial(sizes[i], p), range(len(sizes)), threads)
    return np.sum(batches, axis=0).astype(np.int64)


def sample_joint_spin(plan: MeasurementPlan, threads: Optional[int] = None) -> SampleBatch:
    """
    (a, b) ∈ {±1}² 결합 결과를 shots 번 샘플링

    Raises:
        ConsistencyError: 확률표가 음수이거나 합이 1 이 아님
    """
    if not plan.is_spin:
        raise InvalidParameterError("sample_joint_spin 에는 SpinSetting 이 필요합니다")
    outcomes, probabilities = spin_outcome_table(plan)
    counts = _multinomial_counts(probabilities, plan.shots, plan.seed, threads)
    return SampleBatch(outcomes=outcomes, counts=counts, shots=plan.shots, seed=plan.seed)


def _sample_sequential(plan: MeasurementPlan, threads: Optional[int] = None) -> SampleBatch:
    """순차 붕괴 트리에서 깊이 우선 순서로 개수를 분할"""
    a_bits, b_bits = _collapse_operators(plan)
    depth = plan.side_a.bits
    psi = _state_matrix(plan.state())
    rng = ReproducibleRNG(plan.seed)
    sizes = _batch_sizes(plan.shots)

    def run_batch(index):
        generator = rng.substream(index)
        counts: Dict[Tuple[int, int], int] = {}

        def descend(phi, k, n_a, n_b, n):
            if n == 0:
                return
            if k == depth:
                counts[(n_a, n_b)] = counts.get((n_a, n_b), 0) + n
                return
            children, weights = [], []
            for beta in (0, 1):
                for beta2 in (0, 1):
                    child = a_bits[k][beta].matrix @ phi @ b_bits[k][beta2]
                    children.append((child, n_a | (beta << k), n_b | (beta2 << k)))
                    weights.append(_branch_weight(child))
            weights = np.asarray(weights)
            split = generator.multinomial(n, weights / weights.sum())
            for (child, a, b), m in zip(children, split):
                descend(child, k + 1, a, b, int(m))

        descend(psi, 0, 0, 0, sizes[index])
        return counts

    merged: Dict[Tuple[int, int], int] = {}
    for counts in parallel_map(run_batch, range(len(sizes)), threads):
        for key, value in counts.items():
            merged[key] = merged.get(key, 0) + value
    keys = sorted(merged)
    return SampleBatch(
        outcomes=np.array(keys, dtype=np.int64).reshape(-1, 2),
        counts=np.array([merged[k] for k in keys], dtype=np.int64),
        shots=plan.shots,
        seed=plan.seed,
        bits=depth,
    )


def sample_joint_number(plan: MeasurementPlan, threads: Optional[int] = None) -> SampleBatch:
    """
    비트 0..d−1 결합 측정 결과 (N, N') 샘플링

    2^{2d} ≤ 2^16 이면 확률표, 아니면 순차 붕괴.
    """
    if plan.is_spin:
        raise InvalidParameterError("sample_joint_number 에는 NumberSetting 이 필요합니다")
    if plan.side_a.bits != plan.side_b.bits:
        raise InvalidParameterError("양쪽 비트 수가 같아야 합니다")
    if 2 ** (2 * plan.side_a.bits) <= TABLE_LIMIT:
        outcomes, probabilities = number_outcome_table(plan)
        counts = _multinomial_counts(probabilities, plan.shots, plan.seed, threads)
        return SampleBatch(outcomes=outcomes, counts=counts, shots=plan.shots, seed=plan.seed,
                           bits=plan.side_a.bits)
    logger.info(f"비트 {plan.side_a.bits}개: 순차 붕괴 샘플링 사용")
    return _sample_sequential(plan, threads)


# ----------------------------------------------------------------------
# Bell 추정
# ----------------------------------------------------------------------

def estimate_bell(kind: BellKind, angles: AngleSet, r: float, space: TruncatedFockSpace,
                  shots: int, seed: int, order: Optional[int] = None,
                  weights: Optional[Sequence[float]] = None, familiar: bool = False,
                  target_precision: Optional[float] = None,
                  threads: Optional[int] = None) -> BellReport:
    """
    Bell 함수 좌변의 Monte Carlo 추정

    네 설정 쌍 (αγ, αδ, βγ, βδ) 을 각각 독립 하위 시드로 shots 번 측정한다.

    Args:
        kind: 함수 종류 (CHSH 는 order = d, 기본 1)
        angles: 네 측정 각도
        target_precision: 지정 시 표준오차가 이를 넘으면 경고

    Returns:
        standard_error, analytic_lhs, shots 가 채워진 BellReport
    """
    kind = BellKind(kind)
    rng = ReproducibleRNG(seed)
    warnings: List[str] = []

    if kind is BellKind.CHSH:
        d = order or 1
        E, sigma = [], []
        for index, (a, b) in enumerate(angles.pairs()):
            plan = MeasurementPlan(SpinSetting(a, d), SpinSetting(b, d), r, space, shots, rng.child(index).seed)
            batch = sample_joint_spin(plan, threads)
            E.append(batch.correlation())
            sigma.append(batch.correlation_error())
        report = chsh_functional(*E)
        report.order = d
    else:
        w = kind_weights(kind, order, weights)
        bits = len(w)
        X, sigma = [], []
        for index, (a, b) in enumerate(angles.pairs()):
            plan = MeasurementPlan(
                NumberSetting(NumberBasis.theta(a), bits),
                NumberSetting(NumberBasis.theta(b), bits),
                r, space, shots, rng.child(index).seed,
            )
            batch = sample_joint_number(plan, threads)
            mean, error = batch.weighted_xor_mean(w)
            X.append(mean)
            sigma.append(error)
        report = xor_functional(*X, weight_total=float(np.sum(w)), kind=kind,
                                order=order if kind is not BellKind.WEIGHTED else bits, familiar=familiar)

    analytic = analytic_bell(kind, angles, r, order=order, weights=weights, familiar=familiar)
    report.r = r
    report.gamma = angles.gamma
    report.shots = shots
    report.standard_error = propagate_standard_error(sigma)
    report.analytic_lhs = analytic.lhs_value
    report.tail_weight = plan.state().tail_weight

    if shots < InputValidator.MIN_RECOMMENDED_SHOTS:
        warnings.append(f"shots={shots} 는 통계적으로 불충분합니다")
    if target_precision is not None and report.standard_error > target_precision:
        needed = int(math.ceil(shots * (report.standard_error / target_precision) ** 2))
        warnings.append(
            f"표준오차 {report.standard_error:.3e} > 목표 {target_precision:.1e}; shots ≈ {needed} 필요"
        )
    for message in warnings:
        logger.warning(message)
    report.warnings.extend(warnings)
    logger.info(
        f"{kind.value} 추정: lhs={report.lhs_value:.6f} ± {report.standard_error:.2e} "
        f"(해석 {analytic.lhs_value:.6f}, shots={shots})"
    )
    return report


def convergence_slope(r: float, alpha: float, beta: float, space: TruncatedFockSpace,
                      shots_list: Sequence[int] = (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6),
                      repeats: int = 64, seed: int = 0, d: int = 1,
                      threads: Optional[int] = None) -> ConvergenceFit:
    """
    |경험 E − 해석 E| 의 RMS 를 shots 에 대해 log-log 회귀

    기대 기울기 −0.5. 반복마다 하위 시드 (shots 번호, 반복 번호) 를 쓴다.
    """
    repeats = require_positive_int(repeats, 'repeats')
    exact = analytic_correlation(CorrelationQuery(alpha, beta, d, r))
    rng = ReproducibleRNG(seed)
    errors = []
    for i, shots in enumerate(shots_list):
        sweep = SeedSweepStatistics(reference=exact)
        for j in range(repeats):
            plan = MeasurementPlan(SpinSetting(alpha, d), SpinSetting(beta, d), r, space, int(shots),
                                   rng.child(i, j).seed)
            sweep.add(sample_joint_spin(plan, threads).correlation())
        errors.append(sweep.rms_error())
        logger.debug(f"shots={shots}: RMS 오차 {errors[-1]:.3e}")
    return fit_convergence(shots_list, errors)
