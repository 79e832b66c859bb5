"""
실험 결과 출력 모듈

결과 표를 CSV (UTF-8, 헤더 행, 17 유효자리) 또는 JSON
{"meta": {version, seed, config}, "rows": [...]} 로 출력한다.

- 실수는 17 유효자리로 기록 → 다시 읽으면 비트 단위로 같은 값
- 파일 경로가 없으면 표준 출력

Author: GNJz (Qquarts)
Version: 1.0.0
"""

from __future__ import annotations

import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import numpy as np
import pandas as pd

from ..core.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
SUPPORTED_FORMATS = ('csv', 'json')


@dataclass
class TableData:
    """결과 표 (열 이름 + 행 딕셔너리)"""
    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def append(self, row: Dict[str, Any]):
        missing = [c for c in self.columns if c not in row]
        if missing:
            raise InvalidParameterError(f"행에 열이 없습니다: {missing}")
        self.rows.append({c: row[c] for c in self.columns})

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)


def _to_builtin(value: Any) -> Any:
    """JSON 직렬화용 변환 (numpy 스칼라, NaN → null)"""
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    return value


class ReportGenerator:
    """
    결과 표 출력기

    Args:
        fmt: 'csv' 또는 'json'
        meta: JSON meta 블록 (ExperimentMetadata.to_meta())
    """

    def __init__(self, fmt: str = 'csv', meta: Optional[Dict[str, Any]] = None):
        if fmt not in SUPPORTED_FORMATS:
            raise InvalidParameterError(f"지원하지 않는 출력 형식: {fmt!r} (csv | json)")
        self.fmt = fmt
        self.meta = meta or {}

    def render(self, table: TableData) -> str:
        """표를 문자열로 변환"""
        if self.fmt == 'csv':
            buffer = io.StringIO()
            table.to_dataframe().to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
            return buffer.getvalue()
        document = {
            'meta': _to_builtin(self.meta),
            'rows': [_to_builtin(row) for row in table.rows],
        }
        return json.dumps(document, indent=2, ensure_ascii=False, allow_nan=False) + '\n'

    def write(self, table: TableData, output: Optional[str] = None, stream: Optional[TextIO] = None) -> Optional[str]:
        """
        파일 또는 스트림에 기록

        Returns:
            기록한 파일 경로 (스트림 출력이면 None)
        """
        text = self.render(table)
        if output:
            path = Path(output)
            if path.parent and not path.parent.exists():
                path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8')
            logger.info(f"결과 저장: {path} ({len(table.rows)}행, {self.fmt})")
            return str(path)
        (stream or sys.stdout).write(text)
        return None


def _is_inline_text(source) -> bool:
    return isinstance(source, str) and ('\n' in source or source.lstrip().startswith('{'))


def read_csv_report(source) -> pd.DataFrame:
    """CSV 결과를 정확한 실수 복원으로 다시 읽기 (경로 또는 CSV 문자열)"""
    if _is_inline_text(source):
        source = io.StringIO(source)
    return pd.read_csv(source, float_precision='round_trip', encoding='utf-8')


def read_json_report(source) -> Dict[str, Any]:
    """JSON 결과 다시 읽기 (경로 또는 문자열)"""
    if _is_inline_text(source):
        return json.loads(source)
    return json.loads(Path(source).read_text(encoding='utf-8'))


