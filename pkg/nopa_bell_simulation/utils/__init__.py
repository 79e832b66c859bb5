"""
유틸리티 모듈

입력 검증, 재현성, 통계, 결과 출력, 병렬 map
(verification 은 연산자 모듈에 의존하므로 여기서 가져오지 않는다)
"""

from .input_validator import InputValidator
from .reproducibility import ReproducibleRNG, ExperimentMetadata
from .statistics import SeedSweepStatistics
from .report_generator import ReportGenerator, TableData
from .parallel import parallel_map

__all__ = [
    'InputValidator',
    'ReproducibleRNG',
    'ExperimentMetadata',
    'SeedSweepStatistics',
    'ReportGenerator',
    'TableData',
    'parallel_map',
]
