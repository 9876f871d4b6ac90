"""Shared session machinery for the three transports."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from ..core.types import CommandRequest, CommandResult, TransportKind, utc_now
from .errors import TransportError, TransportErrorKind, UnvalidatedCommandError


@dataclass(frozen=True)
class Endpoint:
    address: str
    port: int
    transport: TransportKind


@dataclass(frozen=True)
class ProbeStatus:
    reachable: bool
    error_kind: TransportErrorKind | None = None

    @classmethod
    def ok(cls) -> "ProbeStatus":
        return cls(reachable=True)

    @classmethod
    def down(cls, kind: TransportErrorKind) -> "ProbeStatus":
        return cls(reachable=False, error_kind=kind)


class Session:
    """One open channel to one endpoint. Not shareable across threads."""

    def __init__(self, endpoint: Endpoint):
        self.endpoint = endpoint
        self.opened_at: datetime = utc_now()
        self._closed = False

    @property
    def closed(self) -> bool:
        return self._closed

    def exec(self, request: CommandRequest) -> CommandResult:
        if self._closed:
            raise TransportError(TransportErrorKind.PROTOCOL_ERROR, "session is closed")
        if not request.validated:
            # Refuse before any I/O; validation is the caller's job and we re-check.
            raise UnvalidatedCommandError("refusing to execute an unvalidated command")
        return self._exec(request)

    def _exec(self, request: CommandRequest) -> CommandResult:
        raise NotImplementedError

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        self._close()

    def _close(self) -> None:
        pass

    def __enter__(self) -> "Session":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
