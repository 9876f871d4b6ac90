"""Domain types: devices, credentials, commands, and engine resources."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Any


class TransportKind(str, Enum):
    SSH = "ssh"
    HTTP_AGENT = "http_agent"
    LOCAL = "local"  # dev/test only; controllers refuse it unless explicitly allowed


class DeviceStatus(str, Enum):
    UNKNOWN = "unknown"
    REACHABLE = "reachable"
    UNREACHABLE = "unreachable"


class CredentialKind(str, Enum):
    SSH_PASSWORD = "ssh_password"
    SSH_KEY = "ssh_key"
    AGENT_KEY = "agent_key"
    NONE = "none"


@dataclass(frozen=True, repr=False)
class Credentials:
    """Per-request secrets. Held in memory only; never serialized or logged.

    Use the factory classmethods rather than the constructor so the
    variant-specific field requirements are checked.
    """

    kind: CredentialKind = CredentialKind.NONE
    username: str = ""
    password: str = ""
    private_key: str = ""
    passphrase: str = ""
    shared_secret: str = ""

    @classmethod
    def ssh_password(cls, username: str, password: str) -> "Credentials":
        if not username:
            raise ValueError("ssh credentials require a username")
        return cls(kind=CredentialKind.SSH_PASSWORD, username=username, password=password)

    @classmethod
    def ssh_key(cls, username: str, private_key: str, passphrase: str = "") -> "Credentials":
        if not username:
            raise ValueError("ssh credentials require a username")
        return cls(
            kind=CredentialKind.SSH_KEY,
            username=username,
            private_key=private_key,
            passphrase=passphrase,
        )

    @classmethod
    def agent(cls, shared_secret: str) -> "Credentials":
        return cls(kind=CredentialKind.AGENT_KEY, shared_secret=shared_secret)

    @classmethod
    def none(cls) -> "Credentials":
        return cls(kind=CredentialKind.NONE)

    def __repr__(self) -> str:  # secrets must never reach logs or tracebacks
        if self.kind in (CredentialKind.SSH_PASSWORD, CredentialKind.SSH_KEY):
            return f"Credentials(kind={self.kind.value}, username={self.username!r})"
        return f"Credentials(kind={self.kind.value})"


@dataclass
class DeviceRecord:
    """One registered remote host running a container engine."""

    id: str
    name: str
    address: str
    port: int
    transport: TransportKind
    created_at: datetime
    last_status: DeviceStatus = DeviceStatus.UNKNOWN

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "address": self.address,
            "port": self.port,
            "transport": self.transport.value,
            "created_at": self.created_at.isoformat(),
            "last_status": self.last_status.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DeviceRecord":
        return cls(
            id=str(data["id"]),
            name=str(data["name"]),
            address=str(data["address"]),
            port=int(data["port"]),
            transport=TransportKind(data["transport"]),
            created_at=_parse_timestamp(data["created_at"]),
            last_status=DeviceStatus(data.get("last_status", "unknown")),
        )


def _parse_timestamp(value: Any) -> datetime:
    ts = datetime.fromisoformat(str(value))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class CommandRequest:
    """A command ready for a transport.

    `validated` must only be set by `validated_request` (i.e. after the
    string passed the active policy); transports refuse requests where
    it is false.
    """

    raw: str
    validated: bool = False
    timeout_ms: int = 30_000

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    stdout: str
    stderr: str
    duration_ms: int  # dispatch-to-response wall time measured on the caller side
    transport: TransportKind

    def to_dict(self) -> dict[str, Any]:
        return {
            "exit_code": self.exit_code,
            "stdout": self.stdout,
            "stderr": self.stderr,
            "duration_ms": self.duration_ms,
            "transport": self.transport.value,
        }


class ContainerState(str, Enum):
    RUNNING = "running"
    EXITED = "exited"
    CREATED = "created"
    PAUSED = "paused"
    OTHER = "other"


@dataclass(frozen=True)
class ContainerRecord:
    container_id: str
    name: str
    image: str
    status: str
    state: ContainerState

    def to_dict(self) -> dict[str, Any]:
        return {
            "container_id": self.container_id,
            "name": self.name,
            "image": self.image,
            "status": self.status,
            "state": self.state.value,
        }


@dataclass(frozen=True)
class ImageRecord:
    image_id: str
    repository: str
    tag: str
    size_text: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "image_id": self.image_id,
            "repository": self.repository,
            "tag": self.tag,
            "size_text": self.size_text,
        }


@dataclass(frozen=True)
class VolumeRecord:
    volume_name: str
    driver: str

    def to_dict(self) -> dict[str, Any]:
        return {"volume_name": self.volume_name, "driver": self.driver}
