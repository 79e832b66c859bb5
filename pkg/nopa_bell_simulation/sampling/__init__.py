"""
샘플링 모듈

Monte Carlo 결합 측정과 LHV 기준 모델
"""

from .sampler import SpinSetting, NumberSetting, MeasurementPlan, SampleBatch
from .lhv_model import LhvModel

__all__ = [
    'SpinSetting',
    'NumberSetting',
    'MeasurementPlan',
    'SampleBatch',
    'LhvModel',
]
