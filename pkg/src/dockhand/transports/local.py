"""Local transport: run the command as a direct child process.

Exists so the whole stack can be exercised with no network and no real
engine. The command string is split with shell quoting rules and spawned
as an argument vector — nothing is interpreted by a shell, so arguments
like a literal $HOME pass through untouched.
"""

from __future__ import annotations

import shlex
import subprocess
import time

from ..core.types import CommandRequest, CommandResult, TransportKind
from .base import Endpoint, Session
from .errors import TransportError, TransportErrorKind

LOCAL_ENDPOINT = Endpoint(address="localhost", port=0, transport=TransportKind.LOCAL)


class LocalSession(Session):
    def __init__(self, endpoint: Endpoint | None = None):
        super().__init__(endpoint or LOCAL_ENDPOINT)

    def _exec(self, request: CommandRequest) -> CommandResult:
        try:
            argv = shlex.split(request.raw)
        except ValueError as exc:
            raise TransportError(TransportErrorKind.INTERNAL, f"unparseable command: {exc}") from exc
        if not argv:
            raise TransportError(TransportErrorKind.INTERNAL, "empty command")
        started = time.perf_counter()
        try:
            proc = subprocess.run(
                argv,
                capture_output=True,
                timeout=request.timeout_ms / 1000.0,
            )
        except subprocess.TimeoutExpired as exc:
            raise TransportError(
                TransportErrorKind.TIMEOUT, f"command exceeded {request.timeout_ms} ms"
            ) from exc
        except FileNotFoundError as exc:
            raise TransportError(TransportErrorKind.INTERNAL, f"executable not found: {argv[0]}") from exc
        except OSError as exc:
            raise TransportError(TransportErrorKind.INTERNAL, str(exc)) from exc
        duration_ms = int((time.perf_counter() - started) * 1000)
        return CommandResult(
            exit_code=proc.returncode,
            stdout=proc.stdout.decode("utf-8", errors="replace"),
            stderr=proc.stderr.decode("utf-8", errors="replace"),
            duration_ms=duration_ms,
            transport=TransportKind.LOCAL,
        )
