"""
Barrier-separated data-parallel execution of full-grid kernel passes.

A kernel is a callable that fills the axis-0 ``rows`` slab of an output buffer
from read-only inputs. ``run`` splits the rows into disjoint slabs, runs them on
a thread pool and returns only when every slab is written. Each slab computes the
same per-node arithmetic, so any thread count gives bit-identical buffers.
"""

import logging
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from apps.core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

Kernel = Callable[[slice], None]


class KernelExecutor:
    """Runs kernel passes over slabs of rows and counts full-grid passes."""

    def __init__(self, threads: int | None = 1):
        threads = 1 if threads is None else int(threads)
        if threads < 1:
            raise ConfigurationError(f"Thread count must be positive, got {threads}.")
        self.threads = threads
        self.passes = 0
        self._pool: ThreadPoolExecutor | None = None

    def partitions(self, extent: int) -> list[slice]:
        chunks = max(1, min(self.threads, extent))
        bounds = np.linspace(0, extent, chunks + 1).astype(int)
        return [slice(int(start), int(stop)) for start, stop in zip(bounds[:-1], bounds[1:], strict=True)]

    def run(self, kernel: Kernel, extent: int) -> None:
        slabs = self.partitions(extent)
        if len(slabs) == 1:
            kernel(slabs[0])
            return
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix="sgml-kernel")
        futures = [self._pool.submit(kernel, slab) for slab in slabs]
        for future in futures:
            future.result()

    def count_pass(self, passes: int = 1) -> None:
        """Record full-grid passes (work units)."""
        self.passes += passes

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self) -> "KernelExecutor":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def executor_resource(threads: int | None = 1) -> Iterator[KernelExecutor]:
    """Executor whose thread pool is shut down with the container resources."""
    executor = KernelExecutor(threads)
    try:
        yield executor
    finally:
        executor.close()
