"""Child-process execution for the agent, with concurrency bounding.

The executor only ever sees commands the agent's own validator accepted;
spawn_count is instrumentation so tests can prove that rejected input
never reaches a process spawn.
"""

from __future__ import annotations

import shlex
import subprocess
import threading
import time
from dataclasses import dataclass

OUTPUT_CAP_BYTES = 4 * 1024 * 1024
TRUNCATION_MARKER = "\n[truncated: output exceeded {cap} bytes]"


class ExecTimeout(Exception):
    pass


class ExecutorBusy(Exception):
    pass


@dataclass
class ExecOutcome:
    exit_code: int
    stdout: str
    stderr: str
    duration_ms: int


def _cap_output(data: bytes, cap: int) -> str:
    text = data[:cap].decode("utf-8", errors="replace")
    if len(data) > cap:
        text += TRUNCATION_MARKER.format(cap=cap)
    return text


class CommandExecutor:
    def __init__(
        self,
        docker_bin: str = "docker",
        *,
        max_concurrency: int = 16,
        reject_when_busy: bool = False,
        output_cap_bytes: int = OUTPUT_CAP_BYTES,
    ):
        self.docker_bin = docker_bin
        self.reject_when_busy = reject_when_busy
        self.output_cap_bytes = output_cap_bytes
        self.spawn_count = 0
        self._spawn_lock = threading.Lock()
        self._slots = threading.BoundedSemaphore(max_concurrency)

    def run(self, command: str, timeout_ms: int) -> ExecOutcome:
        """Spawn the validated command (shell disabled) and wait for it."""
        argv = shlex.split(command)
        if argv and argv[0] == "docker":
            argv[0] = self.docker_bin

        acquired = self._slots.acquire(blocking=not self.reject_when_busy)
        if not acquired:
            raise ExecutorBusy("concurrency limit reached")
        try:
            with self._spawn_lock:
                self.spawn_count += 1
            started = time.perf_counter()
            try:
                proc = subprocess.run(argv, capture_output=True, timeout=timeout_ms / 1000.0)
            except subprocess.TimeoutExpired as exc:
                raise ExecTimeout(f"command exceeded {timeout_ms} ms") from exc
            except (FileNotFoundError, OSError) as exc:
                # Missing engine binary behaves like a shell's 127, as data.
                duration_ms = int((time.perf_counter() - started) * 1000)
                return ExecOutcome(
                    exit_code=127,
                    stdout="",
                    stderr=f"{argv[0]}: cannot execute: {exc}",
                    duration_ms=duration_ms,
                )
            duration_ms = int((time.perf_counter() - started) * 1000)
            return ExecOutcome(
                exit_code=proc.returncode,
                stdout=_cap_output(proc.stdout, self.output_cap_bytes),
                stderr=_cap_output(proc.stderr, self.output_cap_bytes),
                duration_ms=duration_ms,
            )
        finally:
            self._slots.release()
