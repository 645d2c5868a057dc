"""
Wall-clock timing helpers for the benchmark harness
"""

import time
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from threadpoolctl import threadpool_limits


@dataclass
class TimingStats:
    """Per-call wall times in seconds"""
    samples: List[float]

    @property
    def median(self) -> float:
        return float(np.median(self.samples))

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples))

    @property
    def count(self) -> int:
        return len(self.samples)


def time_call(fn: Callable, samples: int, warmups: int = 0,
              setup: Optional[Callable] = None, threads: Optional[int] = 1) -> TimingStats:
    """
    Time fn over `samples` calls after `warmups` untimed calls.

    When given, setup() runs before every call outside the timed region and
    its return value is passed to fn as positional arguments; the state
    generation of a benchmark belongs there.

    Native BLAS/OpenMP pools are limited to `threads` for warm-ups and
    samples (None leaves them unchanged).
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    times = []
    with threadpool_limits(limits=threads):
        for _ in range(warmups):
            fn(*(setup() if setup else ()))
        for _ in range(samples):
            args = setup() if setup else ()
            start = time.perf_counter_ns()
            fn(*args)
            times.append((time.perf_counter_ns() - start) * 1e-9)
    return TimingStats(samples=times)
