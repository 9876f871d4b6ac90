"""Transport failure taxonomy.

Every failure a transport can hit maps to exactly one kind; raw library
errors (httpx, subprocess, OS) never leak past this module's callers.
auth_failed is only raised once a connection existed; unreachable only
when none could be made.
"""

from __future__ import annotations

from enum import Enum


class TransportErrorKind(str, Enum):
    AUTH_FAILED = "auth_failed"
    UNREACHABLE = "unreachable"
    TIMEOUT = "timeout"
    PROTOCOL_ERROR = "protocol_error"
    COMMAND_REJECTED_REMOTELY = "command_rejected_remotely"
    INTERNAL = "internal"


class TransportError(Exception):
    def __init__(self, kind: TransportErrorKind, detail: str = ""):
        super().__init__(f"{kind.value}: {detail}" if detail else kind.value)
        self.kind = kind
        self.detail = detail


class UnvalidatedCommandError(ValueError):
    """exec() was handed a CommandRequest whose validated flag is false."""
