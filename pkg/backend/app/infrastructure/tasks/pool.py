# File: backend/app/infrastructure/tasks/pool.py
# Purpose: Ordered parallel map for independent grid points and Monte Carlo samples
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import structlog

logger = structlog.get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Sequence[T], max_workers: int = 1) -> list[R]:
    """
    Apply ``fn`` to every item and return the results in input order.

    Args:
        fn: Pure function of a single item
        items: Work items
        max_workers: Thread count; 1 (or a single item) runs inline

    Returns:
        Results indexed like ``items``
    """
    items = list(items)
    if max_workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    workers = min(max_workers, len(items))
    logger.debug("ordered_map_started", items=len(items), workers=workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # Executor.map yields in submission order; the first failure is re-raised here
        return list(pool.map(fn, items))
