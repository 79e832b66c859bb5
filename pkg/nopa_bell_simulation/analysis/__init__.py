"""
분석 모듈

NOPA 상관 함수와 Bell 함수
"""

from .correlations import CorrelationQuery, NumericCorrelation
from .bell import AngleSet, BellKind, BellReport

__all__ = [
    'CorrelationQuery',
    'NumericCorrelation',
    'AngleSet',
    'BellKind',
    'BellReport',
]
