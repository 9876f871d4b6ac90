"""Per-device FIFO execution.

Interleaved lifecycle mutations against one engine are racy, so every
command for a device runs on that device's own single worker, in
arrival order. Different devices execute independently.
"""

from __future__ import annotations

import threading
from concurrent.futures import Future, ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from typing import Any, Callable

QUEUE_GRACE_S = 30.0


class DeviceQueueTimeout(Exception):
    pass


class DeviceQueues:
    def __init__(self):
        self._lock = threading.Lock()
        self._executors: dict[str, ThreadPoolExecutor] = {}

    def _executor_for(self, device_id: str) -> ThreadPoolExecutor:
        with self._lock:
            executor = self._executors.get(device_id)
            if executor is None:
                executor = ThreadPoolExecutor(
                    max_workers=1, thread_name_prefix=f"device-{device_id[:8]}"
                )
                self._executors[device_id] = executor
            return executor

    def run(self, device_id: str, fn: Callable[[], Any], *, budget_s: float) -> Any:
        """Submit fn to the device's queue and wait for it.

        budget_s covers both queueing and the run itself; past it the
        caller gets DeviceQueueTimeout (the item still completes in the
        background — commands are not killed mid-flight).
        """
        future: Future = self._executor_for(device_id).submit(fn)
        try:
            return future.result(timeout=budget_s + QUEUE_GRACE_S)
        except FutureTimeoutError:
            raise DeviceQueueTimeout(f"device {device_id} queue exceeded its time budget") from None

    def shutdown(self) -> None:
        with self._lock:
            executors = list(self._executors.values())
            self._executors.clear()
        for executor in executors:
            executor.shutdown(wait=False)
