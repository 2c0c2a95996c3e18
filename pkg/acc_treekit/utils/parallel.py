# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Order-preserving per-item parallelism behind the ``--jobs`` flag."""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Callable, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """Applies ``fn`` to every item; results keep the input order.

    Args:
        fn: A picklable (module-level) function.
        items: Inputs.
        jobs: Worker processes; 1 runs in-process.

    Returns:
        ``[fn(item) for item in items]``.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1 or len(items) < 2:
        return [fn(item) for item in items]

    results: list[R | None] = [None] * len(items)
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        future_to_index = {executor.submit(fn, item): i for i, item in enumerate(items)}
        for future in as_completed(future_to_index):
            results[future_to_index[future]] = future.result()
    logger.debug("processed %d items with %d workers", len(items), jobs)
    return results  # type: ignore[return-value]
