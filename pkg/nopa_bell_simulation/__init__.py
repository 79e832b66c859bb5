"""
NOPA Bell Simulation

수 상태 큐비트와 수 측정 Bell 부등식 시뮬레이션 패키지
- 절단 Fock 공간 위의 의사스핀 연산자 계층
- 비트-큐비트 대응과 절단 수 연산자
- 2모드 스퀴즈드 진공 (NOPA) 상태의 CHSH / 비트 XOR / 수 XOR Bell 함수
- Monte Carlo 결합 측정과 국소 숨은 변수 기준 모델

Author: GNJz (Qquarts)
Version: 1.0.0
"""

__version__ = "1.0.0"
__author__ = "GNJz (Qquarts)"

# 코어 (순서 유지: exceptions → fock_space)
from .core.exceptions import (
    NopaBellError,
    InvalidParameterError,
    TruncationError,
    DimensionMismatchError,
    InvalidCorrelationError,
    ConsistencyError,
)
from .core.fock_space import (
    TruncatedFockSpace,
    StateVector,
    SparseOperator,
    SchmidtState,
    nopa_coefficients,
    schmidt_expectation,
    apply,
)

# 연산자
from .operators.pseudospin import SpinAxis, build_spin, verify_spin_algebra, verify_hierarchy
from .operators.number_bits import (
    NumberBasis,
    bit_operator,
    truncated_number_operator,
    number_spectrum,
    xbasis_eigenvector,
    ybasis_eigenvector,
    quantum_xor,
    product_decomposition_check,
)

# 분석
from .analysis.correlations import CorrelationQuery, squeeze_K, squeeze_Kd, analytic_correlation, numeric_correlation
from .analysis.bell import (
    AngleSet,
    BellKind,
    BellReport,
    chsh_functional,
    chsh_nopa,
    optimal_gamma,
    bit_bell_nopa,
    number_bell_nopa,
    hamming_bell_nopa,
    weighted_bell_nopa,
)

# 샘플링
from .sampling.sampler import MeasurementPlan, SampleBatch, sample_joint_spin, sample_joint_number, estimate_bell
from .sampling.lhv_model import LhvModel, lhv_estimate

__all__ = [
    '__version__',
    '__author__',

    # 코어
    'NopaBellError',
    'InvalidParameterError',
    'TruncationError',
    'DimensionMismatchError',
    'InvalidCorrelationError',
    'ConsistencyError',
    'TruncatedFockSpace',
    'StateVector',
    'SparseOperator',
    'SchmidtState',
    'nopa_coefficients',
    'schmidt_expectation',
    'apply',

    # 연산자
    'SpinAxis',
    'build_spin',
    'verify_spin_algebra',
    'verify_hierarchy',
    'NumberBasis',
    'bit_operator',
    'truncated_number_operator',
    'number_spectrum',
    'xbasis_eigenvector',
    'ybasis_eigenvector',
    'quantum_xor',
    'product_decomposition_check',

    # 분석
    'CorrelationQuery',
    'squeeze_K',
    'squeeze_Kd',
    'analytic_correlation',
    'numeric_correlation',
    'AngleSet',
    'BellKind',
    'BellReport',
    'chsh_functional',
    'chsh_nopa',
    'optimal_gamma',
    'bit_bell_nopa',
    'number_bell_nopa',
    'hamming_bell_nopa',
    'weighted_bell_nopa',

    # 샘플링
    'MeasurementPlan',
    'SampleBatch',
    'sample_joint_spin',
    'sample_joint_number',
    'estimate_bell',
    'LhvModel',
    'lhv_estimate',
]
