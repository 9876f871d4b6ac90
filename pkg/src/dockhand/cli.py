"""Operator command line: run the services or drive the core library directly.

Exit codes for exec/bench: 0 success (a non-zero remote exit code is
still reported as data), 2 command rejected by validation, 3 transport
failure. Credentials come from environment variables or interactive
prompts, never from argv (argv leaks into process listings).

Credential environment variables:
  DOCKHAND_SSH_USER / DOCKHAND_SSH_PASSWORD  password login
  DOCKHAND_SSH_KEY_FILE / DOCKHAND_SSH_KEY_PASSPHRASE  key login
  DOCKHAND_AGENT_KEY  agent shared key
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from . import __version__, bench as bench_mod, transports
from .core.errors import CoreError
from .core.registry import RegistryStore
from .core.types import Credentials, DeviceRecord, TransportKind
from .core.validation import validate_command
from .transports import Endpoint, TransportError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TRANSPORT = 3

DEFAULT_STORE = Path(os.environ.get("DOCKHAND_HOME", Path.home() / ".dockhand")) / "devices.json"


def _echo_err(message: str) -> None:
    click.echo(message, err=True)


def _load_store(store_path: Path) -> RegistryStore:
    if store_path.exists():
        return RegistryStore.load(store_path)
    return RegistryStore()


def _local_allowed() -> bool:
    return os.environ.get("DOCKHAND_ALLOW_LOCAL", "") not in ("", "0", "false")


def _resolve_credentials(transport: TransportKind, prompt: bool = True) -> Credentials:
    if transport is TransportKind.LOCAL:
        return Credentials.none()
    if transport is TransportKind.HTTP_AGENT:
        key = os.environ.get("DOCKHAND_AGENT_KEY", "")
        if not key and prompt:
            key = click.prompt("Agent key", hide_input=True)
        return Credentials.agent(key) if key else Credentials.none()
    username = os.environ.get("DOCKHAND_SSH_USER", "")
    if not username and prompt:
        username = click.prompt("SSH username")
    key_file = os.environ.get("DOCKHAND_SSH_KEY_FILE", "")
    if key_file:
        passphrase = os.environ.get("DOCKHAND_SSH_KEY_PASSPHRASE", "")
        return Credentials.ssh_key(username, Path(key_file).read_text(), passphrase)
    password = os.environ.get("DOCKHAND_SSH_PASSWORD", "")
    if not password and prompt:
        password = click.prompt("SSH password", hide_input=True)
    return Credentials.ssh_password(username, password)


def _device_row(record: DeviceRecord) -> str:
    return (
        f"{record.id}  {record.name:<16} {record.address}:{record.port} "
        f"{record.transport.value:<10} {record.last_status.value}"
    )


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Manage containers on remote engine hosts over SSH or the HTTP agent."""


# ---- services --------------------------------------------------------------


@main.command()
@click.option("--bind", default="127.0.0.1:8080", show_default=True, help="host:port to listen on")
@click.option("--store", type=click.Path(path_type=Path), default=DEFAULT_STORE, show_default=True)
@click.option("--allow-local-transport", is_flag=True, help="permit local (dev/test) devices")
@click.option("--ui-dir", type=click.Path(path_type=Path, exists=True), default=None)
def serve(bind: str, store: Path, allow_local_transport: bool, ui_dir: Path | None) -> None:
    """Run the controller REST service (and the web console when --ui-dir is set)."""
    import uvicorn

    from .controller import ControllerConfig, create_controller_app

    host, port = _parse_bind(bind)
    app = create_controller_app(
        ControllerConfig(
            store_path=store, allow_local_transport=allow_local_transport, ui_dir=ui_dir
        )
    )
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command()
@click.option("--bind", default="0.0.0.0:9090", show_default=True, help="host:port to listen on")
@click.option("--key", default=None, help="shared key (or set AGENT_KEY)")
@click.option("--docker-bin", default="docker", show_default=True)
@click.option("--max-concurrency", default=16, show_default=True)
@click.option("--tls-cert", type=click.Path(path_type=Path, exists=True), default=None)
@click.option("--tls-key", type=click.Path(path_type=Path, exists=True), default=None)
def agent(
    bind: str,
    key: str | None,
    docker_bin: str,
    max_concurrency: int,
    tls_cert: Path | None,
    tls_key: Path | None,
) -> None:
    """Run the host-side command agent."""
    import uvicorn

    from .agent import AgentConfig, create_agent_app

    shared_key = key or os.environ.get("AGENT_KEY", "")
    if not shared_key:
        _echo_err("an agent key is required (--key or AGENT_KEY)")
        raise SystemExit(1)
    host, port = _parse_bind(bind)
    app = create_agent_app(
        AgentConfig(shared_key=shared_key, docker_bin=docker_bin, max_concurrency=max_concurrency)
    )
    uvicorn.run(
        app,
        host=host,
        port=port,
        log_level="info",
        ssl_certfile=str(tls_cert) if tls_cert else None,
        ssl_keyfile=str(tls_key) if tls_key else None,
    )


def _parse_bind(bind: str) -> tuple[str, int]:
    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        raise click.BadParameter(f"expected host:port, got {bind!r}")
    return host, int(port)


# ---- device registry ---------------------------------------------------------


@main.group()
def device() -> None:
    """Manage the registered devices."""


@device.command("add")
@click.option("--name", required=True)
@click.option("--address", required=True)
@click.option("--port", required=True, type=int)
@click.option(
    "--transport",
    required=True,
    type=click.Choice([kind.value for kind in TransportKind]),
)
@click.option("--store", type=click.Path(path_type=Path), default=DEFAULT_STORE, show_default=True)
def device_add(name: str, address: str, port: int, transport: str, store: Path) -> None:
    kind = TransportKind(transport)
    if kind is TransportKind.LOCAL and not _local_allowed():
        _echo_err("local transport is for dev/test; set DOCKHAND_ALLOW_LOCAL=1 to use it")
        raise SystemExit(1)
    registry = _load_store(store)
    try:
        record = registry.add(name=name, address=address, port=port, transport=kind)
    except CoreError as exc:
        _echo_err(f"error: {exc.code}: {exc.detail}")
        raise SystemExit(1) from exc
    registry.save(store)
    click.echo(record.id)


@device.command("ls")
@click.option("--store", type=click.Path(path_type=Path), default=DEFAULT_STORE, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def device_ls(store: Path, fmt: str) -> None:
    registry = _load_store(store)
    records = registry.list()
    if fmt == "json":
        click.echo(json.dumps([record.to_dict() for record in records], indent=2))
        return
    for record in records:
        click.echo(_device_row(record))


@device.command("rm")
@click.argument("device_id")
@click.option("--store", type=click.Path(path_type=Path), default=DEFAULT_STORE, show_default=True)
def device_rm(device_id: str, store: Path) -> None:
    registry = _load_store(store)
    try:
        registry.remove(device_id)
    except CoreError as exc:
        _echo_err(f"error: {exc.code}: {exc.detail}")
        raise SystemExit(1) from exc
    registry.save(store)


# ---- direct execution ---------------------------------------------------------


@main.command("exec")
@click.option("--device", "device_id", required=True)
@click.option("--command", "command", required=True)
@click.option("--timeout-ms", default=30_000, show_default=True)
@click.option("--store", type=click.Path(path_type=Path), default=DEFAULT_STORE, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def exec_command(device_id: str, command: str, timeout_ms: int, store: Path, fmt: str) -> None:
    """Validate COMMAND and run it on a registered device."""
    registry = _load_store(store)
    try:
        record = registry.get(device_id)
    except CoreError as exc:
        _echo_err(f"error: {exc.code}: {exc.detail}")
        raise SystemExit(1) from exc
    if record.transport is TransportKind.LOCAL and not _local_allowed():
        _echo_err("local transport is for dev/test; set DOCKHAND_ALLOW_LOCAL=1 to use it")
        raise SystemExit(1)

    verdict = validate_command(command)
    if not verdict.accepted:
        _echo_err(f"command rejected: {verdict.reason}")
        raise SystemExit(EXIT_VALIDATION)

    from .core.validation import validated_request

    request = validated_request(command, timeout_ms=timeout_ms)
    credentials = _resolve_credentials(record.transport)
    endpoint = Endpoint(address=record.address, port=record.port, transport=record.transport)
    try:
        session = transports.connect(endpoint, credentials)
        try:
            result = session.exec(request)
        finally:
            session.close()
    except TransportError as exc:
        _echo_err(f"transport error: {exc.kind.value}: {exc.detail}")
        raise SystemExit(EXIT_TRANSPORT) from exc

    if fmt == "json":
        click.echo(json.dumps(result.to_dict(), indent=2))
    else:
        if result.stdout:
            click.echo(result.stdout, nl=False)
        if result.stderr:
            _echo_err(result.stderr)
        click.echo(f"(exit {result.exit_code}, {result.duration_ms} ms)")
    raise SystemExit(EXIT_OK)


# ---- bench ---------------------------------------------------------------------


@main.command("bench")
@click.option("--device", "device_id", default=None, help="benchmark a registered device")
@click.option("--address", default=None)
@click.option("--port", type=int, default=None)
@click.option("--transport", type=click.Choice([kind.value for kind in TransportKind]), default=None)
@click.option("--command", default="docker version", show_default=True)
@click.option("--reps", default=50, show_default=True)
@click.option("--levels", default="1,8,32", show_default=True)
@click.option("--warmup", default=3, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--store", type=click.Path(path_type=Path), default=DEFAULT_STORE, show_default=True)
def bench_command(
    device_id: str | None,
    address: str | None,
    port: int | None,
    transport: str | None,
    command: str,
    reps: int,
    levels: str,
    warmup: int,
    fmt: str,
    store: Path,
) -> None:
    """Measure round-trip latency and throughput against one target."""
    if device_id:
        registry = _load_store(store)
        try:
            record = registry.get(device_id)
        except CoreError as exc:
            _echo_err(f"error: {exc.code}: {exc.detail}")
            raise SystemExit(1) from exc
        endpoint = Endpoint(address=record.address, port=record.port, transport=record.transport)
    elif address and port and transport:
        endpoint = Endpoint(address=address, port=port, transport=TransportKind(transport))
    else:
        _echo_err("provide --device or all of --address/--port/--transport")
        raise SystemExit(1)
    if endpoint.transport is TransportKind.LOCAL and not _local_allowed():
        _echo_err("local transport is for dev/test; set DOCKHAND_ALLOW_LOCAL=1 to use it")
        raise SystemExit(1)

    try:
        level_list = tuple(int(part) for part in levels.split(",") if part)
    except ValueError:
        _echo_err(f"bad --levels value: {levels!r}")
        raise SystemExit(1) from None

    credentials = _resolve_credentials(endpoint.transport, prompt=False)
    try:
        config = bench_mod.BenchConfig(
            endpoint=endpoint,
            credentials=credentials,
            command=command,
            repetitions=reps,
            concurrency_levels=level_list,
            warmup=warmup,
        )
    except ValueError as exc:
        _echo_err(f"command rejected: {exc}")
        raise SystemExit(EXIT_VALIDATION) from exc

    try:
        report = bench_mod.run_bench(config)
    except bench_mod.BenchTargetUnreachable as exc:
        _echo_err(f"target unreachable: {exc}")
        raise SystemExit(EXIT_TRANSPORT) from exc
    except bench_mod.BenchAllRequestsFailed as exc:
        _echo_err(f"bench failed: {exc}")
        raise SystemExit(EXIT_TRANSPORT) from exc
    click.echo(bench_mod.emit(report, fmt), nl=False)


if __name__ == "__main__":
    main()
