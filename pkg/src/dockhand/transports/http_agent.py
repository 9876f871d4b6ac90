"""HTTP agent transport: talk to the command agent installed on the host.

Wire protocol: GET /api/v1/health for liveness (the shared key is sent
along so a bad key surfaces as auth_failed instead of first failing at
exec time), POST /api/v1/exec with {"command", "timeout_ms"} returning
the result envelope. Plain HTTP by default, HTTPS when requested.
"""

from __future__ import annotations

import time

import httpx

from ..core.types import CommandRequest, CommandResult, TransportKind
from .base import Endpoint, Session
from .errors import TransportError, TransportErrorKind

KEY_HEADER = "X-Agent-Key"

# Grace added on top of the request's own timeout so the agent's 408
# (cut server-side at timeout_ms) normally arrives before we give up.
_CLIENT_TIMEOUT_GRACE_S = 1.5


class AgentSession(Session):
    def __init__(
        self,
        endpoint: Endpoint,
        shared_secret: str = "",
        *,
        connect_timeout_s: float = 10.0,
        use_tls: bool = False,
        verify_tls: bool = True,
    ):
        super().__init__(endpoint)
        scheme = "https" if use_tls else "http"
        self._headers = {KEY_HEADER: shared_secret} if shared_secret else {}
        self._connect_timeout_s = connect_timeout_s
        self._client = httpx.Client(
            base_url=f"{scheme}://{endpoint.address}:{endpoint.port}",
            verify=verify_tls,
        )

    def check_health(self) -> None:
        """Probe the agent; raises the mapped TransportError when it is not usable."""
        try:
            response = self._client.get(
                "/api/v1/health", headers=self._headers, timeout=self._connect_timeout_s
            )
        except httpx.TimeoutException as exc:
            raise TransportError(TransportErrorKind.TIMEOUT, "health probe timed out") from exc
        except httpx.ConnectError as exc:
            raise TransportError(TransportErrorKind.UNREACHABLE, str(exc)) from exc
        except httpx.HTTPError as exc:
            raise TransportError(TransportErrorKind.PROTOCOL_ERROR, str(exc)) from exc
        if response.status_code == 401:
            raise TransportError(TransportErrorKind.AUTH_FAILED, "agent rejected the shared key")
        if response.status_code != 200:
            raise TransportError(
                TransportErrorKind.PROTOCOL_ERROR, f"health returned {response.status_code}"
            )

    def _exec(self, request: CommandRequest) -> CommandResult:
        body = {"command": request.raw, "timeout_ms": request.timeout_ms}
        timeout_s = request.timeout_ms / 1000.0 + _CLIENT_TIMEOUT_GRACE_S
        started = time.perf_counter()
        try:
            response = self._client.post(
                "/api/v1/exec", json=body, headers=self._headers, timeout=timeout_s
            )
        except httpx.TimeoutException as exc:
            raise TransportError(
                TransportErrorKind.TIMEOUT, f"no response within {request.timeout_ms} ms"
            ) from exc
        except httpx.ConnectError as exc:
            raise TransportError(TransportErrorKind.UNREACHABLE, str(exc)) from exc
        except httpx.HTTPError as exc:
            raise TransportError(TransportErrorKind.PROTOCOL_ERROR, str(exc)) from exc
        duration_ms = int((time.perf_counter() - started) * 1000)

        if response.status_code == 401:
            raise TransportError(TransportErrorKind.AUTH_FAILED, "agent rejected the shared key")
        if response.status_code == 422:
            raise TransportError(
                TransportErrorKind.COMMAND_REJECTED_REMOTELY, _error_detail(response)
            )
        if response.status_code == 408:
            raise TransportError(TransportErrorKind.TIMEOUT, "agent reported a command timeout")
        if response.status_code != 200:
            raise TransportError(
                TransportErrorKind.PROTOCOL_ERROR,
                f"agent returned {response.status_code}: {_error_detail(response)}",
            )

        try:
            envelope = response.json()
            return CommandResult(
                exit_code=int(envelope["exit_code"]),
                stdout=str(envelope["stdout"]),
                stderr=str(envelope["stderr"]),
                duration_ms=duration_ms,
                transport=TransportKind.HTTP_AGENT,
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise TransportError(
                TransportErrorKind.PROTOCOL_ERROR, f"malformed agent envelope: {exc}"
            ) from exc

    def _close(self) -> None:
        self._client.close()


def _error_detail(response: httpx.Response) -> str:
    try:
        data = response.json()
    except ValueError:
        return response.text[:200]
    if isinstance(data, dict):
        reason = data.get("reason")
        error = data.get("error", "")
        return f"{error}: {reason}" if reason else str(error)
    return str(data)[:200]
