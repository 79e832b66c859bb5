"""
코어 모듈

예외 계층과 절단 Fock 공간 (상태, 희소 연산자, Schmidt 상태)
"""

from .exceptions import (
    NopaBellError,
    InvalidParameterError,
    TruncationError,
    DimensionMismatchError,
    InvalidCorrelationError,
    ConsistencyError,
)
from .fock_space import TruncatedFockSpace, StateVector, SparseOperator, SchmidtState

__all__ = [
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
]
