from __future__ import annotations

import logging
import threading
from collections.abc import Callable
from collections.abc import Iterable
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import TypeVar

from app import state

T = TypeVar("T")
R = TypeVar("R")

WORKER_THREAD_PREFIX = "kernel-worker"


def map_jobs(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """\
    Run `fn` over independent jobs, returning results in input order.

    When a thread pool has been configured (see `worker_pool`), the jobs are
    submitted to it; otherwise they run sequentially on the calling thread.
    Every job must only read its own input, so the assembled results are
    identical regardless of how the work was scheduled.
    """
    # jobs spawned from inside a worker run inline, a saturated pool would
    # otherwise wait on itself
    if state.executor is None or _on_worker_thread():
        return [fn(item) for item in items]

    futures = [state.executor.submit(fn, item) for item in items]
    return [future.result() for future in futures]


@contextmanager
def worker_pool(threads: int) -> Iterator[None]:
    """\
    Configure the process-wide kernel thread pool for the duration of the
    context. A thread count of 1 keeps everything on the calling thread.
    """
    if threads < 1:
        raise ValueError("thread count must be at least 1")

    previous = state.executor
    if threads == 1:
        state.executor = None
        try:
            yield
        finally:
            state.executor = previous
        return None

    logging.debug("Starting kernel worker pool", extra={"threads": threads})
    with ThreadPoolExecutor(
        max_workers=threads,
        thread_name_prefix=WORKER_THREAD_PREFIX,
    ) as executor:
        state.executor = executor
        try:
            yield
        finally:
            state.executor = previous
    return None


def _on_worker_thread() -> bool:
    return threading.current_thread().name.startswith(WORKER_THREAD_PREFIX)
