"""
예외 계층

라이브러리 전체에서 사용하는 오류 유형 (모두 ValueError 파생)
"""


class NopaBellError(ValueError):
    """라이브러리 기본 예외"""


class InvalidParameterError(NopaBellError):
    """유효하지 않은 파라미터 (NaN/Inf, 음수 스퀴징, 범위 밖 인덱스 등)"""


class TruncationError(NopaBellError):
    """절단 차원과 호환되지 않는 연산 (2d ∤ M, 비트 깊이 초과)"""


class DimensionMismatchError(NopaBellError):
    """연산자/상태 차원 불일치"""


class InvalidCorrelationError(NopaBellError):
    """[-1, 1] 범위를 벗어난 상관값"""


class ConsistencyError(NopaBellError):
    """내부 일관성 위반 (음의 확률, 확률 합 ≠ 1)"""
