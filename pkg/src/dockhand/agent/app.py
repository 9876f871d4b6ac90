"""The host-side HTTP command agent.

Wire protocol (normative for the http_agent transport):
  GET  /api/v1/health  -> 200 {"status": "ok", "version": ...}; no auth
                          required, but when an X-Agent-Key header is
                          present it is verified so probes can detect a
                          bad key without running anything.
  POST /api/v1/exec    -> 200 result envelope {exit_code, stdout,
                          stderr, duration_ms}; non-zero exit codes are
                          data, not HTTP errors.
                          401 unauthorized / 422 command_rejected /
                          408 timeout / 400 malformed body / 429 busy.

Requests authenticate with the X-Agent-Key header compared in constant
time, and the check runs before the body is ever read. Every command is
re-validated here no matter what the client claims (the agent is the
last line of defense on the host).
"""

from __future__ import annotations

import hmac
import logging
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .. import __version__
from ..core.validation import DEFAULT_POLICY, ValidationPolicy, validate_command
from .executor import CommandExecutor, ExecTimeout, ExecutorBusy

KEY_HEADER = "X-Agent-Key"
DEFAULT_TIMEOUT_MS = 30_000
TIMEOUT_CAP_MS = 60_000

logger = logging.getLogger("dockhand.agent")


@dataclass
class AgentConfig:
    shared_key: str
    docker_bin: str = "docker"
    max_concurrency: int = 16
    reject_when_busy: bool = False
    policy: ValidationPolicy = field(default_factory=lambda: DEFAULT_POLICY)

    def __post_init__(self) -> None:
        if not self.shared_key:
            raise ValueError("agent requires a non-empty shared key")
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be at least 1")


def _key_matches(config: AgentConfig, request: Request) -> bool:
    provided = request.headers.get(KEY_HEADER, "")
    return hmac.compare_digest(provided.encode(), config.shared_key.encode())


def _unauthorized() -> JSONResponse:
    return JSONResponse({"error": "unauthorized"}, status_code=401)


def create_agent_app(config: AgentConfig) -> FastAPI:
    app = FastAPI(title="dockhand agent", version=__version__, docs_url=None, redoc_url=None)
    executor = CommandExecutor(
        config.docker_bin,
        max_concurrency=config.max_concurrency,
        reject_when_busy=config.reject_when_busy,
    )
    app.state.config = config
    app.state.executor = executor

    @app.api_route("/api/v1/health", methods=["GET", "HEAD"])
    def health(request: Request) -> Response:
        # Open endpoint; key verification only happens when a key is offered.
        if KEY_HEADER in request.headers and not _key_matches(config, request):
            return _unauthorized()
        if request.method == "HEAD":
            return Response(status_code=200)
        return JSONResponse({"status": "ok", "version": __version__})

    @app.post("/api/v1/exec")
    async def exec_command(request: Request) -> Response:
        if not _key_matches(config, request):
            # Deliberately before request.json(): the body of an
            # unauthenticated request is never read.
            return _unauthorized()

        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "malformed_body"}, status_code=400)
        if not isinstance(body, dict) or not isinstance(body.get("command"), str):
            return JSONResponse({"error": "malformed_body"}, status_code=400)
        timeout_ms = body.get("timeout_ms", DEFAULT_TIMEOUT_MS)
        if not isinstance(timeout_ms, int) or isinstance(timeout_ms, bool) or timeout_ms <= 0:
            return JSONResponse({"error": "malformed_body"}, status_code=400)
        timeout_ms = min(timeout_ms, TIMEOUT_CAP_MS)

        verdict = validate_command(body["command"], config.policy)
        if not verdict.accepted:
            logger.info("rejected command (%s)", verdict.reason)
            return JSONResponse(
                {"error": "command_rejected", "reason": verdict.reason}, status_code=422
            )

        try:
            outcome = await run_in_threadpool(executor.run, verdict.normalized, timeout_ms)
        except ExecTimeout:
            return JSONResponse({"error": "timeout"}, status_code=408)
        except ExecutorBusy:
            return JSONResponse({"error": "busy"}, status_code=429)
        logger.info("executed %s -> exit %d", verdict.normalized.split()[1], outcome.exit_code)
        return JSONResponse(
            {
                "exit_code": outcome.exit_code,
                "stdout": outcome.stdout,
                "stderr": outcome.stderr,
                "duration_ms": outcome.duration_ms,
            }
        )

    return app
