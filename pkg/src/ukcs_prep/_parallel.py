"""Order-preserving chunked map over an optional process pool."""

from __future__ import annotations

import multiprocessing
from itertools import islice
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_WORKER_FN: Callable | None = None


def _init(fn: Callable) -> None:
    global _WORKER_FN
    _WORKER_FN = fn


def _call(chunk: list) -> list:
    return _WORKER_FN(chunk)


def chunks(items: Iterable[T], size: int) -> Iterator[list[T]]:
    it = iter(items)
    while chunk := list(islice(it, size)):
        yield chunk


def ordered_map(
    fn: Callable[[list[T]], list[R]],
    items: Iterable[T],
    workers: int = 1,
    chunk_size: int = 2000,
) -> Iterator[R]:
    """Apply ``fn`` to consecutive chunks of ``items`` and yield results in order.

    ``fn`` is shipped to each worker once, so it must be picklable. Input is
    consumed lazily; at most a few chunks per worker are in flight.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    if workers <= 1:
        for chunk in chunks(items, chunk_size):
            yield from fn(chunk)
        return
    methods = multiprocessing.get_all_start_methods()
    ctx = multiprocessing.get_context("fork" if "fork" in methods else "spawn")
    with ctx.Pool(workers, initializer=_init, initargs=(fn,)) as pool:
        for result in pool.imap(_call, chunks(items, chunk_size)):
            yield from result
