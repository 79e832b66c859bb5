"""
연산자 모듈

의사스핀 계열과 비트/수 연산자
"""

from .pseudospin import AxisKind, SpinAxis, SpinFamily, build_spin, commutator
from .number_bits import BasisKind, NumberBasis, EigenCoeffVector, bit_operator, popcount

__all__ = [
    'AxisKind',
    'SpinAxis',
    'SpinFamily',
    'build_spin',
    'commutator',
    'BasisKind',
    'NumberBasis',
    'EigenCoeffVector',
    'bit_operator',
    'popcount',
]
