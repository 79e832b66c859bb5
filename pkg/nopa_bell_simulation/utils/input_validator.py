"""
입력 검증 모듈

라이브러리 함수용 require_* 헬퍼 (위반 시 즉시 예외)와
CLI 실험 설정용 InputValidator (오류/경고 목록 수집)
"""

from __future__ import annotations

import logging
import math
import re
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..core.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

# "pi/4", "3pi/8", "-pi", "3*pi/4", "0.5pi" 형태
_PI_PATTERN = re.compile(
    r'^\s*(?P<sign>[+-]?)\s*(?P<num>\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$',
    re.IGNORECASE,
)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool)


def require_finite(value: Any, name: str) -> float:
    """유한 실수 검사"""
    if not _is_number(value):
        raise InvalidParameterError(f"{name}은(는) 숫자여야 합니다: {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name}은(는) 유효한 숫자여야 합니다: {value}")
    return value


def require_squeezing(r: Any) -> float:
    """스퀴징 파라미터 r: 유한, ≥ 0"""
    r = require_finite(r, 'r')
    if r < 0:
        raise InvalidParameterError(f"r은 0 이상이어야 합니다: {r}")
    return r


def require_angle(angle: Any, name: str = 'angle') -> float:
    """각도 (라디안, 유한)"""
    return require_finite(angle, name)


def require_positive_int(value: Any, name: str) -> int:
    """양의 정수"""
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise InvalidParameterError(f"{name}은(는) 정수여야 합니다: {value!r}")
    if value < 1:
        raise InvalidParameterError(f"{name}은(는) 1 이상이어야 합니다: {value}")
    return int(value)


def require_nonnegative_int(value: Any, name: str) -> int:
    """0 이상 정수"""
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise InvalidParameterError(f"{name}은(는) 정수여야 합니다: {value!r}")
    if value < 0:
        raise InvalidParameterError(f"{name}은(는) 0 이상이어야 합니다: {value}")
    return int(value)


def require_weights(weights: Sequence[Any]) -> np.ndarray:
    """비트 가중치: 유한, ≥ 0, 전부 0 은 불가"""
    if weights is None or len(weights) == 0:
        raise InvalidParameterError("weights가 비어 있습니다")
    values = np.array([require_finite(w, f'weights[{i}]') for i, w in enumerate(weights)])
    if np.any(values < 0):
        raise InvalidParameterError(f"weights는 0 이상이어야 합니다: {values.tolist()}")
    if not np.any(values > 0):
        raise InvalidParameterError("weights가 모두 0 입니다")
    return values


def parse_angle(text: Any) -> float:
    """
    각도 파싱: 십진 라디안 또는 π 의 유리수 배

    Examples:
        "0.5" → 0.5, "pi/4" → π/4, "-3pi/8" → −3π/8
    """
    if _is_number(text):
        return require_angle(text)
    text = str(text).strip()
    match = _PI_PATTERN.match(text)
    if match:
        num = Fraction(match.group('num')) if match.group('num') else Fraction(1)
        den = Fraction(match.group('den')) if match.group('den') else Fraction(1)
        if den == 0:
            raise InvalidParameterError(f"각도 분모가 0 입니다: {text!r}")
        value = float(num / den) * math.pi
        return -value if match.group('sign') == '-' else value
    try:
        return require_angle(float(text))
    except ValueError:
        raise InvalidParameterError(f"각도를 해석할 수 없습니다: {text!r}") from None


def format_pi_multiple(angle: float, digits: int = 6) -> float:
    """각도를 π 의 배수로 (digits 자리 반올림)"""
    return round(angle / math.pi, digits)


class InputValidator:
    """
    실험 설정 검증 클래스

    require_* 와 달리 모든 문제를 수집해 (is_valid, errors, warnings) 로 반환한다.
    """

    # 샘플 수 경고 기준
    MIN_RECOMMENDED_SHOTS = 100
    MAX_SHOTS = 10 ** 9

    def __init__(self):
        self.validation_errors: List[str] = []
        self.validation_warnings: List[str] = []

    def validate_experiment(self, data: Dict[str, Any]) -> Tuple[bool, List[str], List[str]]:
        """
        실험 설정 딕셔너리 검증

        Args:
            data: ExperimentConfig.to_dict() 결과

        Returns:
            (is_valid, errors, warnings)
        """
        self.validation_errors = []
        self.validation_warnings = []

        for i, r in enumerate(data.get('r', [])):
            if not _is_number(r) or not math.isfinite(r):
                self.validation_errors.append(f"r[{i}]는 유효한 숫자여야 합니다")
            elif r < 0:
                self.validation_errors.append(f"r[{i}]는 0 이상이어야 합니다")
            elif r > 50:
                self.validation_warnings.append(f"r[{i}]={r}: 배정밀도에서 tanh r = 1 로 포화됩니다")

        depth = data.get('bit_depth', 0)
        if not isinstance(depth, int) or depth < 0:
            self.validation_errors.append("D는 0(자동) 이상의 정수여야 합니다")
        elif depth > 20:
            self.validation_warnings.append(f"D={depth}: 차원 2^{depth} 은 메모리를 많이 사용합니다")

        for key in ('d', 'k'):
            value = data.get(key)
            if value is None:
                continue
            minimum = 1 if key == 'd' else 0
            if not isinstance(value, int) or value < minimum:
                self.validation_errors.append(f"{key}는 {minimum} 이상의 정수여야 합니다")

        for i, angle in enumerate(data.get('gamma', [])):
            if not _is_number(angle) or not math.isfinite(angle):
                self.validation_errors.append(f"gamma[{i}]는 유효한 각도여야 합니다")

        weights = data.get('weights')
        if data.get('kind') == 'weighted' and data.get('command') == 'sample' and weights is None:
            self.validation_errors.append("weighted 종류에는 --weights 가 필요합니다")
        if weights is not None:
            if len(weights) == 0:
                self.validation_errors.append("weights가 비어 있습니다")
            elif any((not _is_number(w)) or w < 0 or not math.isfinite(w) for w in weights):
                self.validation_errors.append("weights는 유한한 0 이상의 값이어야 합니다")
            elif not any(w > 0 for w in weights):
                self.validation_errors.append("weights가 모두 0 입니다")

        shots = data.get('shots')
        if shots is not None:
            if not isinstance(shots, int) or shots < 1:
                self.validation_errors.append("shots는 1 이상의 정수여야 합니다")
            elif shots > self.MAX_SHOTS:
                self.validation_errors.append(f"shots는 {self.MAX_SHOTS} 이하여야 합니다")
            elif shots < self.MIN_RECOMMENDED_SHOTS:
                self.validation_warnings.append(f"shots={shots} 는 통계적으로 불충분합니다")

        random_sets = data.get('random_sets', 0)
        if not isinstance(random_sets, int) or random_sets < 0:
            self.validation_errors.append("random_sets는 0 이상의 정수여야 합니다")

        is_valid = len(self.validation_errors) == 0

        if not is_valid:
            logger.error(f"입력 검증 실패: {self.validation_errors}")
        if self.validation_warnings:
            logger.warning(f"입력 검증 경고: {self.validation_warnings}")

        return is_valid, self.validation_errors, self.validation_warnings
