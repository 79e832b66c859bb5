"""
연산자 불변식 테스트

절단 공간 위에서 정확히 성립해야 하는 항등식 검증 세트
- 스핀 대수, 교환 계층 (및 비예시 [s_{x,2}, s_{x,3}] ≠ 0)
- 비트 분해 / 수 연산자 스펙트럼
- x/y 기저 고유벡터
- 꼬리 가중치 항등식, Schmidt 기댓값 오라클
- 진공 x-비트 블록 확률
- 국소 결정론적 전략 한계

실패는 예외가 아니라 결과 딕셔너리의 passed=False 로 보고한다.
"""

from __future__ import annotations

import logging
from typing import Dict, List

import numpy as np

from ..analysis.bell import enumerate_local_strategies
from ..core.exceptions import InvalidParameterError
from ..core.fock_space import (
    SparseOperator,
    TruncatedFockSpace,
    apply,
    nopa_coefficients,
    schmidt_expectation,
    tail_identity_residual,
    tensor_expectation,
)
from ..operators.number_bits import (
    bit_operator,
    number_spectrum,
    product_decomposition_check,
    vacuum_xbit_block_probability,
    xbasis_eigenvector,
    ybasis_eigenvector,
)
from ..operators.pseudospin import IDENTITY_TOLERANCE, build_spin, commutator, verify_hierarchy, verify_spin_algebra

logger = logging.getLogger(__name__)

# 조밀 오라클 최대 차원
DENSE_LIMIT = 16


class InvariantSuite:
    """
    연산자 불변식 테스트 클래스

    Args:
        bit_depth: 검증할 절단 깊이 D (M = 2^D)
    """

    def __init__(self, bit_depth: int = 4):
        if not isinstance(bit_depth, int) or bit_depth < 2:
            raise InvalidParameterError(f"불변식 테스트에는 D ≥ 2 가 필요합니다: {bit_depth!r}")
        self.space = TruncatedFockSpace.from_bit_depth(bit_depth)
        self.bit_depth = bit_depth
        self.test_results: List[Dict] = []

    def _record(self, name: str, passed: bool, residual: float, detail: str = '') -> Dict:
        result = {
            'test_name': name,
            'passed': bool(passed),
            'residual': float(residual),
            'message': 'Passed' if passed else f'Failed: {detail}',
        }
        self.test_results.append(result)
        return result

    def test_spin_algebra(self) -> List[Dict]:
        """d = 2^k (2d | M) 와 d = 3 (M = 12) 의 스핀 대수"""
        results = []
        cases = [(2 ** k, self.space) for k in range(self.bit_depth)]
        cases.append((3, TruncatedFockSpace(12)))
        for d, space in cases:
            report = verify_spin_algebra(d, space)
            results.append(self._record(
                f'spin_algebra_d{d}_M{space.dimension}', report.passed, report.max_residual, str(report.failed),
            ))
        return results

    def test_hierarchy(self) -> List[Dict]:
        """서로 다른 계층의 교환과 비예시"""
        report = verify_hierarchy(self.bit_depth - 1, self.space)
        results = [self._record(
            f'commuting_hierarchy_k{self.bit_depth - 1}', report.passed, report.max_residual,
            str(report.nonzero_pairs),
        )]
        space24 = TruncatedFockSpace(24)
        residual = commutator(build_spin('x', 2, space24), build_spin('x', 3, space24)).max_abs()
        results.append(self._record('non_commuting_x2_x3_M24', residual > 0.0, residual, '교환자가 0 입니다'))
        return results

    def test_product_decomposition(self) -> Dict:
        space = TruncatedFockSpace(min(self.space.dimension, 8))
        report = product_decomposition_check(space)
        return self._record(f'product_decomposition_M{space.dimension}', report.passed, report.residual)

    def test_number_operators(self) -> List[Dict]:
        """비트 재구성과 스펙트럼"""
        M = self.space.dimension
        total = SparseOperator.zeros(M)
        for k in range(self.bit_depth):
            total = total + bit_operator('z', k, self.space) * (2 ** k)
        residual = (total - SparseOperator.diagonal(np.arange(M))).max_abs()
        results = [self._record('bit_reconstruction', residual == 0.0, residual)]

        if M <= DENSE_LIMIT:
            worst = 0.0
            for basis in ('z', 'x', 'y'):
                for d in range(1, self.bit_depth + 1):
                    spectrum = number_spectrum(basis, d, self.space)
                    expected = np.repeat(np.arange(2 ** d), M // 2 ** d)
                    worst = max(worst, float(np.max(np.abs(spectrum - expected))))
            results.append(self._record('number_spectrum', worst <= 1e-10, worst))
        return results

    def test_eigenvectors(self) -> List[Dict]:
        """s_{x,2^k}|m_x⟩ = (−1)^{bit_k m}|m_x⟩, y 동일"""
        results = []
        for basis, builder in (('x', xbasis_eigenvector), ('y', ybasis_eigenvector)):
            worst = 0.0
            for k in range(self.bit_depth):
                spin = build_spin(basis, 2 ** k, self.space)
                for m in range(self.space.dimension):
                    v = builder(m, self.space).to_state()
                    sign = -1.0 if (m >> k) & 1 else 1.0
                    worst = max(worst, float(np.max(np.abs(apply(spin, v).amplitudes - sign * v.amplitudes))))
            results.append(self._record(f'{basis}_eigenvectors', worst == 0.0, worst))
        return results

    def test_tail_identity(self, radii=(0.5, 1.0, 2.0)) -> Dict:
        worst = max(tail_identity_residual(r, self.space) for r in radii)
        return self._record('tail_identity', worst <= IDENTITY_TOLERANCE, worst)

    def test_schmidt_oracle(self) -> Dict:
        """schmidt_expectation 대 조밀 텐서곱 (M ≤ 8)"""
        space = TruncatedFockSpace(min(self.space.dimension, 8))
        state = nopa_coefficients(1.0, space)
        worst = 0.0
        axes = ('x', 'y', 'z', 'plus', 'minus')
        for a in axes:
            for b in axes:
                A, B = build_spin(a, 1, space), build_spin(b, 2 if space.dimension >= 4 else 1, space)
                worst = max(worst, abs(schmidt_expectation(state, A, B) - tensor_expectation(state, A, B)))
        return self._record('schmidt_oracle', worst <= IDENTITY_TOLERANCE, worst)

    def test_vacuum_block_probability(self) -> Dict:
        """진공 x-비트 블록 확률 = 2^{−L}"""
        worst = 0.0
        for L in range(1, max(self.bit_depth - 1, 1)):
            worst = max(worst, abs(vacuum_xbit_block_probability(0, L, self.space) - 2.0 ** (-L)))
        return self._record('vacuum_xbit_block', worst <= IDENTITY_TOLERANCE, worst)

    def test_local_strategies(self) -> Dict:
        report = enumerate_local_strategies()
        excess = max(report.max_chsh - 2.0, report.max_bit_xor - 1.0, 0.0)
        return self._record('local_strategy_bounds', report.passed, excess)

    def run_all_tests(self) -> Dict:
        """
        모든 테스트 실행

        Returns:
            {'total', 'passed', 'failed', 'results'}
        """
        self.test_results = []
        self.test_spin_algebra()
        self.test_hierarchy()
        self.test_product_decomposition()
        self.test_number_operators()
        self.test_eigenvectors()
        self.test_tail_identity()
        self.test_schmidt_oracle()
        self.test_vacuum_block_probability()
        self.test_local_strategies()

        passed = sum(1 for r in self.test_results if r['passed'])
        total = len(self.test_results)
        logger.info(f"불변식 테스트 결과: {passed}/{total} 통과 (D={self.bit_depth})")
        for result in self.test_results:
            if not result['passed']:
                logger.error(f"{result['test_name']}: {result['message']} (잔차 {result['residual']:.3e})")

        return {
            'total': total,
            'passed': passed,
            'failed': total - passed,
            'results': self.test_results,
        }
