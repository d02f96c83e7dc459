"""Wall time, memory and CPU tracking around one command run."""
import os
import time
import logging
from typing import Dict, Optional

import psutil

logger = logging.getLogger(__name__)

BYTES_PER_MIB = 1024 * 1024


class RunMetrics:
    """
    Context manager sampling the process with psutil.

    CPU seconds include reaped child processes, so pool workers of a parallel
    search are counted once the pool has shut down.
    """

    def __init__(self, command: str) -> None:
        self.command = command
        self.duration = 0.0
        self.mem_before = 0.0
        self.mem_after = 0.0
        self.cpu_seconds = 0.0
        self._start: Optional[float] = None
        self._process = psutil.Process(os.getpid())

    def _cpu_total(self) -> float:
        times = self._process.cpu_times()
        return times.user + times.system + times.children_user + times.children_system

    def __enter__(self) -> "RunMetrics":
        self._start = time.time()
        self.mem_before = self._process.memory_info().rss / BYTES_PER_MIB
        self._cpu_start = self._cpu_total()
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        self.duration = time.time() - self._start
        self.mem_after = self._process.memory_info().rss / BYTES_PER_MIB
        self.cpu_seconds = self._cpu_total() - self._cpu_start

        logger.info(
            f"[METRICS] "
            f"Command: {self.command} | "
            f"Duration: {self.duration:.2f}s | "
            f"Memory: {self.mem_before:.0f}->{self.mem_after:.0f} MB (Delta {self.mem_after - self.mem_before:+.0f}) | "
            f"CPU: {self.cpu_seconds:.2f}s"
        )
        return False

    def as_dict(self) -> Dict[str, float]:
        return {
            "duration_seconds": round(self.duration, 3),
            "rss_before_mib": round(self.mem_before, 1),
            "rss_after_mib": round(self.mem_after, 1),
            "cpu_seconds": round(self.cpu_seconds, 3),
        }
