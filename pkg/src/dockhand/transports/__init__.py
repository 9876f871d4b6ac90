"""Uniform execute-command contract over SSH, the HTTP agent, or a local process.

connect() gives back a Session bound to one endpoint; session.exec()
runs one validated CommandRequest and returns a CommandResult; probe()
is the cheap liveness check. All failures surface as TransportError
with exactly one taxonomy kind.
"""

from __future__ import annotations

from ..core.types import CredentialKind, Credentials, TransportKind
from .base import Endpoint, ProbeStatus, Session
from .errors import TransportError, TransportErrorKind, UnvalidatedCommandError
from .http_agent import AgentSession
from .local import LocalSession
from .ssh import SshOptions, SshSession, classify_ssh_failure, default_known_hosts_path

__all__ = [
    "AgentSession",
    "Endpoint",
    "LocalSession",
    "ProbeStatus",
    "Session",
    "SshOptions",
    "SshSession",
    "TransportError",
    "TransportErrorKind",
    "UnvalidatedCommandError",
    "classify_ssh_failure",
    "close",
    "connect",
    "default_known_hosts_path",
    "probe",
]

_SSH_CREDENTIAL_KINDS = (CredentialKind.SSH_PASSWORD, CredentialKind.SSH_KEY)
_AGENT_CREDENTIAL_KINDS = (CredentialKind.AGENT_KEY, CredentialKind.NONE)


def connect(
    endpoint: Endpoint,
    credentials: Credentials,
    *,
    connect_timeout_s: float = 10.0,
    ssh_options: SshOptions | None = None,
    agent_use_tls: bool = False,
) -> Session:
    """Open an authenticated session to the endpoint.

    Credentials must match the transport: ssh_* for ssh, agent_key or
    none for http_agent, none for local.
    """
    kind = endpoint.transport
    if kind is TransportKind.LOCAL:
        if credentials.kind is not CredentialKind.NONE:
            raise ValueError("local transport takes no credentials")
        return LocalSession(endpoint)
    if kind is TransportKind.HTTP_AGENT:
        if credentials.kind not in _AGENT_CREDENTIAL_KINDS:
            raise ValueError("http_agent transport takes agent_key or no credentials")
        session = AgentSession(
            endpoint,
            credentials.shared_secret,
            connect_timeout_s=connect_timeout_s,
            use_tls=agent_use_tls,
        )
        try:
            session.check_health()
        except TransportError:
            session.close()
            raise
        return session
    if kind is TransportKind.SSH:
        if credentials.kind not in _SSH_CREDENTIAL_KINDS:
            raise ValueError("ssh transport requires ssh_password or ssh_key credentials")
        options = ssh_options or SshOptions(connect_timeout_s=connect_timeout_s)
        session = SshSession(endpoint, credentials, options)
        session.open()
        return session
    raise ValueError(f"unknown transport: {kind}")


def probe(
    endpoint: Endpoint,
    credentials: Credentials,
    *,
    connect_timeout_s: float = 10.0,
    ssh_options: SshOptions | None = None,
) -> ProbeStatus:
    """Liveness check: connect, authenticate, and close. Never raises for
    remote failures — they come back encoded in the status."""
    if endpoint.transport is TransportKind.LOCAL:
        return ProbeStatus.ok()
    try:
        session = connect(
            endpoint,
            credentials,
            connect_timeout_s=connect_timeout_s,
            ssh_options=ssh_options,
        )
    except TransportError as exc:
        return ProbeStatus.down(exc.kind)
    session.close()
    return ProbeStatus.ok()


def close(session: Session) -> None:
    session.close()
