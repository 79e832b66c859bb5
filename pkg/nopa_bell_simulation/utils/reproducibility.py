"""
재현성 보장 시스템

Monte Carlo 샘플링을 위한 재현성 보장 모듈
- Seed 관리 (64비트 정수)
- 스트림 분할: SeedSequence(seed, spawn_key=(i, j, …))
- 실험 메타데이터

같은 (seed, spawn_key) 는 스레드 수와 실행 순서에 상관없이 같은 난수열을 만든다.
"""

from __future__ import annotations

import hashlib
import json
import os
import platform
from typing import Any, Dict, Optional

import numpy as np

from .. import __version__
from ..core.exceptions import InvalidParameterError

SEED_LIMIT = 2 ** 64


def require_seed(seed: Any) -> int:
    """64비트 비음수 정수 시드"""
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise InvalidParameterError(f"seed는 정수여야 합니다: {seed!r}")
    if not 0 <= int(seed) < SEED_LIMIT:
        raise InvalidParameterError(f"seed는 [0, 2^64) 범위여야 합니다: {seed}")
    return int(seed)


class ReproducibleRNG:
    """
    재현 가능한 랜덤 생성기

    모든 랜덤 연산은 여기서 관리되어 재현성을 보장합니다.
    서브 스트림은 호출 순서가 아니라 키로만 결정됩니다.
    """

    def __init__(self, seed: Optional[int] = None):
        """
        Args:
            seed: 시드 값 (None이면 OS 엔트로피로 생성)
        """
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % SEED_LIMIT)
        self.seed = require_seed(seed)
        self.main_rng = np.random.default_rng(np.random.SeedSequence(self.seed))
        self._sub_rngs: Dict[str, np.random.Generator] = {}

    def substream(self, *key: int) -> np.random.Generator:
        """
        키 (예: 설정 쌍 번호, 배치 번호) 로 결정되는 독립 생성기

        매 호출마다 새 Generator 를 만든다 (공유 상태 없음).
        """
        spawn_key = tuple(require_seed(k) for k in key)
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=spawn_key))

    def child(self, *key: int) -> 'ReproducibleRNG':
        """키에서 유도된 64비트 시드를 갖는 하위 RNG"""
        state = np.random.SeedSequence(self.seed, spawn_key=tuple(key)).generate_state(2, dtype=np.uint32)
        return ReproducibleRNG(int(state[0]) | (int(state[1]) << 32))

    def get_rng(self, component: str = 'main') -> np.random.Generator:
        """
        컴포넌트별 RNG 반환

        Args:
            component: 'main' 또는 임의 이름 (이름 해시로 키 결정)
        """
        if component == 'main':
            return self.main_rng
        if component not in self._sub_rngs:
            digest = hashlib.sha256(component.encode('utf-8')).digest()
            self._sub_rngs[component] = self.substream(int.from_bytes(digest[:4], 'little'))
        return self._sub_rngs[component]


class ExperimentMetadata:
    """
    실험 메타데이터

    출력 파일의 "meta" 블록 {version, seed, config} 과 설정 해시를 기록한다.
    """

    def __init__(self, config: Dict[str, Any], seed: Optional[int] = None):
        self.version = __version__
        self.seed = seed
        self.config = dict(config)
        config_str = json.dumps(self.config, sort_keys=True, default=str)
        self.config_hash = hashlib.sha256(config_str.encode()).hexdigest()
        self.platform_info = {
            'os': platform.system(),
            'python_version': platform.python_version(),
            'numpy_version': np.__version__,
            'cpu_count': os.cpu_count(),
        }

    def to_meta(self) -> Dict[str, Any]:
        """출력 파일용 meta 블록"""
        return {'version': self.version, 'seed': self.seed, 'config': self.config}

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.to_meta(),
            'config_hash': self.config_hash,
            'platform_info': self.platform_info,
        }
