"""SSH transport built on the OpenSSH client binary.

connect() authenticates once and leaves a ControlMaster socket behind;
every exec reuses it (ControlPersist keeps the master alive 60 s past
the last use, which is what makes repeated commands cheap). Each command
runs on its own exec channel, so the remote exit code is captured
deterministically — no interactive shell is ever involved.

Host keys follow trust-on-first-use against a dedicated known-hosts
file; strict checking can be switched on. Passwords and key passphrases
reach ssh through an askpass helper fed by an environment variable, so
no secret is ever written to disk or passed on a command line.
"""

from __future__ import annotations

import os
import shutil
import stat
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from ..core.types import CommandRequest, CommandResult, CredentialKind, Credentials, TransportKind
from .base import Endpoint, Session
from .errors import TransportError, TransportErrorKind

_ASKPASS_SECRET_VAR = "DOCKHAND_ASKPASS_SECRET"

_ASKPASS_SCRIPT = """#!/bin/sh
printf '%s\\n' "${DOCKHAND_ASKPASS_SECRET}"
"""

# Grace on top of the configured deadline before we kill the ssh client.
_SUBPROCESS_GRACE_S = 1.5


@dataclass(frozen=True)
class SshOptions:
    connect_timeout_s: float = 10.0
    known_hosts_path: Path | None = None  # default: ~/.dockhand/known_hosts
    strict_host_key: bool = False  # False = trust-on-first-use (accept-new)
    control_persist_s: int = 60


def default_known_hosts_path() -> Path:
    return Path(os.environ.get("DOCKHAND_HOME", Path.home() / ".dockhand")) / "known_hosts"


def classify_ssh_failure(stderr: str) -> TransportErrorKind:
    """Map OpenSSH stderr to the error taxonomy."""
    text = stderr.lower()
    if "permission denied" in text or "too many authentication failures" in text:
        return TransportErrorKind.AUTH_FAILED
    if (
        "connection refused" in text
        or "no route to host" in text
        or "network is unreachable" in text
        or "could not resolve hostname" in text
        or "name or service not known" in text
    ):
        return TransportErrorKind.UNREACHABLE
    if "timed out" in text or "timeout" in text:
        return TransportErrorKind.TIMEOUT
    return TransportErrorKind.PROTOCOL_ERROR


class SshSession(Session):
    def __init__(self, endpoint: Endpoint, credentials: Credentials, options: SshOptions | None = None):
        if credentials.kind not in (CredentialKind.SSH_PASSWORD, CredentialKind.SSH_KEY):
            raise ValueError("ssh transport requires ssh_password or ssh_key credentials")
        super().__init__(endpoint)
        self._options = options or SshOptions()
        self._credentials = credentials
        self._workdir = Path(tempfile.mkdtemp(prefix="dockhand-ssh-"))
        os.chmod(self._workdir, stat.S_IRWXU)
        self._control_path = self._workdir / "ctl"
        self._target = f"{credentials.username}@{endpoint.address}"

        self._askpass_path = self._workdir / "askpass.sh"
        self._askpass_path.write_text(_ASKPASS_SCRIPT, encoding="utf-8")
        os.chmod(self._askpass_path, stat.S_IRWXU)

        self._key_path: Path | None = None
        if credentials.kind is CredentialKind.SSH_KEY:
            self._key_path = self._workdir / "id_key"
            self._key_path.write_text(credentials.private_key, encoding="utf-8")
            os.chmod(self._key_path, stat.S_IRUSR | stat.S_IWUSR)

    def _base_argv(self) -> list[str]:
        known_hosts = self._options.known_hosts_path or default_known_hosts_path()
        known_hosts.parent.mkdir(parents=True, exist_ok=True)
        host_key_policy = "yes" if self._options.strict_host_key else "accept-new"
        argv = [
            "ssh",
            "-F", "/dev/null",
            "-o", f"ControlPath={self._control_path}",
            "-o", "ControlMaster=auto",
            "-o", f"ControlPersist={self._options.control_persist_s}",
            "-o", f"ConnectTimeout={int(self._options.connect_timeout_s)}",
            "-o", f"UserKnownHostsFile={known_hosts}",
            "-o", f"StrictHostKeyChecking={host_key_policy}",
            "-o", "NumberOfPasswordPrompts=1",
            "-o", "LogLevel=ERROR",
            "-p", str(self.endpoint.port),
        ]
        if self._key_path is not None:
            argv += ["-i", str(self._key_path), "-o", "IdentitiesOnly=yes"]
            argv += ["-o", "PreferredAuthentications=publickey"]
        else:
            argv += ["-o", "PreferredAuthentications=password,keyboard-interactive"]
        return argv

    def _auth_env(self) -> dict[str, str]:
        env = os.environ.copy()
        env["SSH_ASKPASS"] = str(self._askpass_path)
        env["SSH_ASKPASS_REQUIRE"] = "force"
        env.setdefault("DISPLAY", ":0")
        if self._credentials.kind is CredentialKind.SSH_PASSWORD:
            env[_ASKPASS_SECRET_VAR] = self._credentials.password
        else:
            env[_ASKPASS_SECRET_VAR] = self._credentials.passphrase
        return env

    def open(self) -> None:
        """Authenticate and fork the control master."""
        argv = self._base_argv() + ["-f", "-N", self._target]
        try:
            proc = subprocess.run(
                argv,
                capture_output=True,
                env=self._auth_env(),
                start_new_session=True,  # keep ssh off our TTY so askpass is used
                timeout=self._options.connect_timeout_s + _SUBPROCESS_GRACE_S,
            )
        except subprocess.TimeoutExpired as exc:
            self.close()
            raise TransportError(TransportErrorKind.TIMEOUT, "ssh connect timed out") from exc
        except FileNotFoundError as exc:
            self.close()
            raise TransportError(TransportErrorKind.INTERNAL, "ssh binary not found") from exc
        if proc.returncode != 0:
            stderr = proc.stderr.decode("utf-8", errors="replace")
            self.close()
            raise TransportError(classify_ssh_failure(stderr), stderr.strip())

    def _exec(self, request: CommandRequest) -> CommandResult:
        argv = self._base_argv() + ["--", self._target, request.raw]
        started = time.perf_counter()
        try:
            proc = subprocess.run(
                argv,
                capture_output=True,
                env=self._auth_env(),
                start_new_session=True,
                timeout=request.timeout_ms / 1000.0 + _SUBPROCESS_GRACE_S,
            )
        except subprocess.TimeoutExpired as exc:
            raise TransportError(
                TransportErrorKind.TIMEOUT, f"no response within {request.timeout_ms} ms"
            ) from exc
        duration_ms = int((time.perf_counter() - started) * 1000)
        stderr = proc.stderr.decode("utf-8", errors="replace")
        if proc.returncode == 255:
            # 255 is the ssh client's own failure code; a remote command
            # exiting 255 is indistinguishable and treated the same way.
            raise TransportError(classify_ssh_failure(stderr), stderr.strip())
        return CommandResult(
            exit_code=proc.returncode,
            stdout=proc.stdout.decode("utf-8", errors="replace"),
            stderr=stderr,
            duration_ms=duration_ms,
            transport=TransportKind.SSH,
        )

    def _close(self) -> None:
        if self._control_path.exists():
            subprocess.run(
                ["ssh", "-o", f"ControlPath={self._control_path}", "-O", "exit", self._target],
                capture_output=True,
                timeout=10,
            )
        shutil.rmtree(self._workdir, ignore_errors=True)
