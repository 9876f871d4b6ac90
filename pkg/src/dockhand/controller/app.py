"""Operator-facing REST service.

Request pipeline for anything that executes on a device: validate the
command, enqueue on the device's FIFO, connect via the device's
transport, execute, return the structured result. Rejected commands
never reach a transport.

Status mapping: validation rejections are 422, bad credentials 401,
upstream transport failures 502 (with the taxonomy kind in the body),
unknown devices 404. Credentials travel per request — in JSON bodies
for POST/DELETE, in X-SSH-Username/X-SSH-Password or X-Agent-Key
headers for GET routes — and are never stored or logged.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.concurrency import run_in_threadpool

from .. import transports
from ..core.errors import (
    CoreError,
    DeviceNotFoundError,
    InvalidAddressError,
    InvalidPortError,
    ListingParseError,
    StoreIOError,
)
from ..core.listing import ListingKind, build_listing_command, parse_listing
from ..core.registry import RegistryStore
from ..core.types import (
    CommandRequest,
    CommandResult,
    CredentialKind,
    Credentials,
    DeviceRecord,
    DeviceStatus,
    TransportKind,
)
from ..core.validation import DEFAULT_POLICY, ValidationPolicy, validate_command
from ..transports import Endpoint, TransportError, TransportErrorKind
from .queues import DeviceQueues, DeviceQueueTimeout

logger = logging.getLogger("dockhand.controller")

CONTAINER_ID_RE = re.compile(r"^[A-Za-z0-9_.-]{1,128}$")
LOGS_TAIL_DEFAULT = 100
LOGS_TAIL_MAX = 10_000
DEFAULT_EXEC_TIMEOUT_MS = 30_000

# TransportError.kind -> (http status, ApiError code). Total by construction;
# a unit test walks the enum to prove it.
TRANSPORT_ERROR_MAP: dict[TransportErrorKind, tuple[int, str]] = {
    TransportErrorKind.AUTH_FAILED: (401, "auth_failed"),
    TransportErrorKind.UNREACHABLE: (502, "unreachable"),
    TransportErrorKind.TIMEOUT: (502, "timeout"),
    TransportErrorKind.PROTOCOL_ERROR: (502, "protocol_error"),
    TransportErrorKind.COMMAND_REJECTED_REMOTELY: (422, "validation_rejected"),
    TransportErrorKind.INTERNAL: (500, "internal"),
}


@dataclass
class ControllerConfig:
    store_path: Path | None = None
    allow_local_transport: bool = False
    ui_dir: Path | None = None
    policy: ValidationPolicy = field(default_factory=lambda: DEFAULT_POLICY)
    connect_timeout_s: float = 10.0


class ApiFault(Exception):
    """Internal carrier for a JSON error response."""

    def __init__(self, status: int, code: str, detail: str = "", extra: dict | None = None):
        super().__init__(code)
        self.status = status
        self.code = code
        self.detail = detail
        self.extra = extra or {}

    def response(self) -> JSONResponse:
        body: dict[str, Any] = {"code": self.code, "detail": self.detail}
        body.update(self.extra)
        return JSONResponse(body, status_code=self.status)


def _fault_from_transport(exc: TransportError) -> ApiFault:
    status, code = TRANSPORT_ERROR_MAP[exc.kind]
    return ApiFault(status, code, exc.detail)


def _fault_from_core(exc: CoreError, status: int) -> ApiFault:
    return ApiFault(status, exc.code, exc.detail)


def parse_credentials(data: Any) -> Credentials:
    """Credential JSON shape: {"kind": ..., variant fields...}; null/missing means none."""
    if data is None:
        return Credentials.none()
    if not isinstance(data, dict):
        raise ApiFault(400, "invalid_credentials", "credentials must be an object")
    kind = data.get("kind", "none")
    try:
        if kind == CredentialKind.SSH_PASSWORD.value:
            return Credentials.ssh_password(
                str(data.get("username", "")), str(data.get("password", ""))
            )
        if kind == CredentialKind.SSH_KEY.value:
            return Credentials.ssh_key(
                str(data.get("username", "")),
                str(data.get("private_key", "")),
                str(data.get("passphrase", "")),
            )
        if kind == CredentialKind.AGENT_KEY.value:
            return Credentials.agent(str(data.get("key", "")))
        if kind == CredentialKind.NONE.value:
            return Credentials.none()
    except ValueError as exc:
        raise ApiFault(400, "invalid_credentials", str(exc)) from exc
    raise ApiFault(400, "invalid_credentials", f"unknown credential kind: {kind!r}")


def credentials_from_headers(request: Request) -> Credentials:
    """GET routes have no body; credentials arrive in headers instead."""
    username = request.headers.get("X-SSH-Username")
    if username:
        return Credentials.ssh_password(username, request.headers.get("X-SSH-Password", ""))
    agent_key = request.headers.get("X-Agent-Key")
    if agent_key:
        return Credentials.agent(agent_key)
    return Credentials.none()


def create_controller_app(config: ControllerConfig) -> FastAPI:
    app = FastAPI(title="dockhand controller", docs_url=None, redoc_url=None)

    if config.store_path is not None and Path(config.store_path).exists():
        registry = RegistryStore.load(config.store_path)
    else:
        registry = RegistryStore()

    queues = DeviceQueues()
    app.state.registry = registry
    app.state.queues = queues
    app.state.config = config

    def persist() -> None:
        if config.store_path is not None:
            try:
                registry.save(config.store_path)
            except StoreIOError as exc:
                logger.error("could not persist device store: %s", exc)

    def get_device(device_id: str) -> DeviceRecord:
        try:
            return registry.get(device_id)
        except DeviceNotFoundError as exc:
            raise _fault_from_core(exc, 404) from exc

    def endpoint_of(device: DeviceRecord) -> Endpoint:
        return Endpoint(address=device.address, port=device.port, transport=device.transport)

    def check_transport_allowed(transport: TransportKind) -> None:
        if transport is TransportKind.LOCAL and not config.allow_local_transport:
            raise ApiFault(
                400,
                "invalid_transport",
                "local transport is only available when the controller runs with --allow-local-transport",
            )

    def run_on_device(
        device: DeviceRecord, credentials: Credentials, command: str, timeout_ms: int
    ) -> CommandResult:
        """The full pipeline; raises ApiFault for every failure mode."""
        verdict = validate_command(command, config.policy)
        if not verdict.accepted:
            raise ApiFault(
                422, "validation_rejected", f"command rejected: {verdict.reason}",
                extra={"reason": verdict.reason},
            )
        request = CommandRequest(raw=verdict.normalized, validated=True, timeout_ms=timeout_ms)

        def job() -> CommandResult:
            session = transports.connect(
                endpoint_of(device), credentials, connect_timeout_s=config.connect_timeout_s
            )
            try:
                return session.exec(request)
            finally:
                session.close()

        try:
            return queues.run(device.id, job, budget_s=timeout_ms / 1000.0)
        except DeviceQueueTimeout as exc:
            raise ApiFault(502, "timeout", str(exc)) from exc
        except TransportError as exc:
            raise _fault_from_transport(exc) from exc
        except ValueError as exc:
            # credential variant does not fit the device's transport
            raise ApiFault(400, "invalid_credentials", str(exc)) from exc

    async def read_json(request: Request) -> dict[str, Any]:
        raw = await request.body()
        if not raw:
            return {}
        try:
            body = json.loads(raw)
        except ValueError:
            raise ApiFault(400, "malformed_body", "request body must be JSON") from None
        if not isinstance(body, dict):
            raise ApiFault(400, "malformed_body", "request body must be a JSON object")
        return body

    @app.exception_handler(ApiFault)
    async def handle_fault(_request: Request, exc: ApiFault) -> JSONResponse:
        return exc.response()

    # ---- device registry -------------------------------------------------

    @app.post("/api/devices", status_code=201)
    async def add_device(request: Request) -> Any:
        body = await read_json(request)
        transport_raw = body.get("transport", "")
        try:
            transport = TransportKind(transport_raw)
        except ValueError:
            raise ApiFault(400, "invalid_transport", f"unknown transport: {transport_raw!r}") from None
        check_transport_allowed(transport)
        port = body.get("port")
        if not isinstance(port, int) or isinstance(port, bool):
            raise ApiFault(400, "invalid_port", "port must be an integer")
        try:
            record = registry.add(
                name=str(body.get("name", "")),
                address=str(body.get("address", "")),
                port=port,
                transport=transport,
            )
        except InvalidAddressError as exc:
            raise _fault_from_core(exc, 400) from exc
        except InvalidPortError as exc:
            raise _fault_from_core(exc, 400) from exc
        persist()
        logger.info("registered device %s (%s)", record.id, record.transport.value)
        return record.to_dict()

    @app.get("/api/devices")
    def list_devices() -> Any:
        return [record.to_dict() for record in registry.list()]

    @app.get("/api/devices/{device_id}")
    def get_device_route(device_id: str) -> Any:
        return get_device(device_id).to_dict()

    @app.delete("/api/devices/{device_id}", status_code=204)
    def delete_device(device_id: str) -> Response:
        try:
            registry.remove(device_id)
        except DeviceNotFoundError as exc:
            raise _fault_from_core(exc, 404) from exc
        persist()
        return Response(status_code=204)

    # ---- probe -----------------------------------------------------------

    @app.post("/api/devices/{device_id}/probe")
    async def probe_device(device_id: str, request: Request) -> Any:
        device = get_device(device_id)
        body = await read_json(request)
        credentials = parse_credentials(body.get("credentials"))
        try:
            status = await run_in_threadpool(
                transports.probe,
                endpoint_of(device),
                credentials,
                connect_timeout_s=config.connect_timeout_s,
            )
        except ValueError as exc:
            raise ApiFault(400, "invalid_credentials", str(exc)) from exc
        registry.set_status(
            device.id, DeviceStatus.REACHABLE if status.reachable else DeviceStatus.UNREACHABLE
        )
        persist()
        if status.reachable:
            return {"status": "reachable"}
        return {"status": "unreachable", "error_kind": status.error_kind.value}

    # ---- command execution ----------------------------------------------

    @app.post("/api/devices/{device_id}/exec")
    async def exec_on_device(device_id: str, request: Request) -> Any:
        device = get_device(device_id)
        body = await read_json(request)
        credentials = parse_credentials(body.get("credentials"))
        command = body.get("command")
        if not isinstance(command, str):
            raise ApiFault(400, "malformed_body", "command must be a string")
        timeout_ms = body.get("timeout_ms", DEFAULT_EXEC_TIMEOUT_MS)
        if not isinstance(timeout_ms, int) or isinstance(timeout_ms, bool) or timeout_ms <= 0:
            raise ApiFault(400, "malformed_body", "timeout_ms must be a positive integer")
        result = await run_in_threadpool(run_on_device, device, credentials, command, timeout_ms)
        logger.info("exec on device %s -> exit %d", device.id, result.exit_code)
        return result.to_dict()

    # ---- resource listings -----------------------------------------------

    def run_listing(device: DeviceRecord, credentials: Credentials, kind: ListingKind) -> Any:
        command = build_listing_command(kind)
        result = run_on_device(device, credentials, command, DEFAULT_EXEC_TIMEOUT_MS)
        if result.exit_code != 0:
            raise ApiFault(
                502, "protocol_error", f"listing command failed: {result.stderr.strip()[:200]}"
            )
        try:
            records = parse_listing(kind, result.stdout)
        except ListingParseError as exc:
            raise ApiFault(502, "protocol_error", exc.detail) from exc
        return [record.to_dict() for record in records]

    @app.get("/api/devices/{device_id}/containers")
    async def list_containers(device_id: str, request: Request) -> Any:
        device = get_device(device_id)
        credentials = credentials_from_headers(request)
        return await run_in_threadpool(run_listing, device, credentials, ListingKind.CONTAINERS_ALL)

    @app.get("/api/devices/{device_id}/images")
    async def list_images(device_id: str, request: Request) -> Any:
        device = get_device(device_id)
        credentials = credentials_from_headers(request)
        return await run_in_threadpool(run_listing, device, credentials, ListingKind.IMAGES)

    @app.get("/api/devices/{device_id}/volumes")
    async def list_volumes(device_id: str, request: Request) -> Any:
        device = get_device(device_id)
        credentials = credentials_from_headers(request)
        return await run_in_threadpool(run_listing, device, credentials, ListingKind.VOLUMES)

    # ---- container lifecycle ----------------------------------------------

    def check_container_id(container_id: str) -> str:
        if not CONTAINER_ID_RE.match(container_id):
            raise ApiFault(
                422, "validation_rejected", f"container id does not match {CONTAINER_ID_RE.pattern}",
                extra={"reason": "invalid_container_id"},
            )
        return container_id

    async def lifecycle(device_id: str, container_id: str, action: str, request: Request) -> Any:
        device = get_device(device_id)
        check_container_id(container_id)
        body = await read_json(request) if request.method != "GET" else {}
        credentials = parse_credentials(body.get("credentials"))
        command = f"docker {action} {container_id}"
        result = await run_in_threadpool(
            run_on_device, device, credentials, command, DEFAULT_EXEC_TIMEOUT_MS
        )
        return result.to_dict()

    @app.post("/api/devices/{device_id}/containers/{container_id}/start")
    async def start_container(device_id: str, container_id: str, request: Request) -> Any:
        return await lifecycle(device_id, container_id, "start", request)

    @app.post("/api/devices/{device_id}/containers/{container_id}/stop")
    async def stop_container(device_id: str, container_id: str, request: Request) -> Any:
        return await lifecycle(device_id, container_id, "stop", request)

    @app.post("/api/devices/{device_id}/containers/{container_id}/restart")
    async def restart_container(device_id: str, container_id: str, request: Request) -> Any:
        return await lifecycle(device_id, container_id, "restart", request)

    @app.delete("/api/devices/{device_id}/containers/{container_id}")
    async def remove_container(device_id: str, container_id: str, request: Request) -> Any:
        return await lifecycle(device_id, container_id, "rm", request)

    @app.get("/api/devices/{device_id}/containers/{container_id}/logs")
    async def container_logs(
        device_id: str, container_id: str, request: Request, tail: int = LOGS_TAIL_DEFAULT
    ) -> Any:
        device = get_device(device_id)
        check_container_id(container_id)
        if tail < 0 or tail > LOGS_TAIL_MAX:
            raise ApiFault(
                400, "validation_rejected", f"tail must be between 0 and {LOGS_TAIL_MAX}"
            )
        credentials = credentials_from_headers(request)
        command = f"docker logs --tail {tail} {container_id}"
        result = await run_in_threadpool(
            run_on_device, device, credentials, command, DEFAULT_EXEC_TIMEOUT_MS
        )
        if result.exit_code != 0:
            raise ApiFault(502, "protocol_error", f"logs failed: {result.stderr.strip()[:200]}")
        return {"stdout": result.stdout}

    # ---- UI ----------------------------------------------------------------

    if config.ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(config.ui_dir), html=True), name="ui")

    return app
