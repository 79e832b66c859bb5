"""
실험 설정 (ExperimentConfig)

CLI 인자를 하나의 데이터클래스로 모은다.
- D = 0 이면 r 마다 꼬리 가중치 기준으로 자동 선택
- 각도는 십진 라디안 또는 π 의 유리수 배 ("pi/4", "-3pi/8")

Author: GNJz (Qquarts)
Version: 1.0.0
"""

from __future__ import annotations

import argparse
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .core.exceptions import InvalidParameterError
from .core.fock_space import TruncatedFockSpace, select_bit_depth
from .utils.input_validator import InputValidator, parse_angle, require_finite

DEFAULT_SHOTS = 100_000
DEFAULT_SEED = 0
DEFAULT_VERIFY_DEPTH = 4


def parse_float_list(text: Optional[str], name: str) -> List[float]:
    """'0.5,1,2' → [0.5, 1.0, 2.0]"""
    if text is None or str(text).strip() == '':
        return []
    values = []
    for item in str(text).split(','):
        try:
            values.append(require_finite(float(item), name))
        except ValueError:
            raise InvalidParameterError(f"{name} 값을 해석할 수 없습니다: {item!r}") from None
    return values


def parse_angle_list(text: Optional[str]) -> List[float]:
    """'0,pi/4,-pi/8' → 라디안 목록"""
    if text is None or str(text).strip() == '':
        return []
    return [parse_angle(item) for item in str(text).split(',')]


@dataclass
class ExperimentConfig:
    """
    하위 명령 공통 설정

    Attributes:
        command: 하위 명령 이름
        r: 스퀴징 목록
        bit_depth: 절단 깊이 D (0 = 자동)
        d, k: 그룹 크기 / 비트 번호 (명령별 의미)
        gamma: 명시 각도 목록 (라디안)
        gamma_grid: [0, π/2] 등간격 각도 개수
        alpha, beta: correlate 각도 목록
        angles: 네 각도 (α, β, γ, δ) 직접 지정
        kind: sample 명령의 Bell 함수 종류
    """
    command: str
    r: List[float] = field(default_factory=lambda: [1.0])
    bit_depth: int = 0
    d: Optional[int] = None
    k: Optional[int] = None
    gamma: List[float] = field(default_factory=list)
    gamma_grid: Optional[int] = None
    alpha: List[float] = field(default_factory=list)
    beta: List[float] = field(default_factory=list)
    angles: List[float] = field(default_factory=list)
    kind: str = 'chsh'
    optimal: bool = False
    weights: Optional[List[float]] = None
    familiar: bool = False
    raw: bool = False
    shots: int = DEFAULT_SHOTS
    seed: int = DEFAULT_SEED
    random_sets: int = 0
    fmt: str = 'csv'
    output: Optional[str] = None
    threads: Optional[int] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'ExperimentConfig':
        """argparse 결과에서 생성 (문자열 목록 파싱 포함)"""
        get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
        r_values = parse_float_list(get('r'), 'r')
        weights = get('weights')
        config = cls(
            command=args.command,
            r=r_values or [1.0],
            bit_depth=get('D', 0),
            d=get('d'),
            k=get('k'),
            gamma=parse_angle_list(get('gamma')),
            gamma_grid=get('gamma_grid'),
            alpha=parse_angle_list(get('alpha')),
            beta=parse_angle_list(get('beta')),
            angles=parse_angle_list(get('angles')),
            kind=get('kind', 'chsh') or 'chsh',
            optimal=bool(get('optimal', False)),
            weights=parse_float_list(weights, 'weights') if weights is not None else None,
            familiar=bool(get('familiar', False)),
            raw=bool(get('raw', False)),
            shots=get('shots', DEFAULT_SHOTS),
            seed=get('seed') if get('seed') is not None else DEFAULT_SEED,
            random_sets=get('random_sets', 0),
            fmt=get('format', 'csv') or 'csv',
            output=get('output'),
            threads=get('threads'),
        )
        if config.angles and len(config.angles) != 4:
            raise InvalidParameterError(f"--angles 는 네 각도가 필요합니다: {len(config.angles)}개")
        if config.gamma_grid is not None and config.gamma_grid < 1:
            raise InvalidParameterError(f"--gamma-grid 는 1 이상이어야 합니다: {config.gamma_grid}")
        return config

    def validate(self) -> List[str]:
        """
        InputValidator 로 검증

        Returns:
            경고 목록

        Raises:
            InvalidParameterError: 첫 번째 오류
        """
        is_valid, errors, warnings = InputValidator().validate_experiment(self.to_dict())
        if not is_valid:
            raise InvalidParameterError(errors[0])
        return warnings

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def space_for(self, r: float) -> TruncatedFockSpace:
        """r 에 쓸 절단 공간 (D = 0 이면 자동 선택)"""
        depth = self.bit_depth or select_bit_depth(r)
        return TruncatedFockSpace.from_bit_depth(depth)

    def gamma_values(self) -> List[float]:
        """명시 각도 + 격자 각도 (둘 다 없으면 빈 목록)"""
        values = list(self.gamma)
        if self.gamma_grid:
            values.extend(float(g) for g in np.linspace(0.0, math.pi / 2, self.gamma_grid))
        return values
