"""
스레드 풀 병렬 map

- 결과 순서는 항상 입력 순서
- NOPA_BELL_THREADS 환경 변수로 최대 스레드 수 지정 (0 또는 미지정 = CPU 수)
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ..core.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

THREADS_ENV = 'NOPA_BELL_THREADS'

T = TypeVar('T')
R = TypeVar('R')


def resolve_thread_count(threads: Optional[int] = None) -> int:
    """
    사용할 스레드 수

    Args:
        threads: 명시값 (None 이면 환경 변수, 0 이면 CPU 수)
    """
    if threads is None:
        raw = os.environ.get(THREADS_ENV, '').strip()
        try:
            threads = int(raw) if raw else 0
        except ValueError:
            raise InvalidParameterError(f"{THREADS_ENV}는 정수여야 합니다: {raw!r}") from None
    if threads < 0:
        raise InvalidParameterError(f"스레드 수는 0 이상이어야 합니다: {threads}")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


def parallel_map(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    입력 순서를 보존하는 병렬 map

    스레드가 1개이거나 항목이 1개 이하면 풀을 만들지 않는다.
    """
    items = list(items)
    workers = min(resolve_thread_count(threads), max(len(items), 1))
    if workers == 1:
        return [func(item) for item in items]
    logger.debug(f"parallel_map: {len(items)}개 작업, {workers} 스레드")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
