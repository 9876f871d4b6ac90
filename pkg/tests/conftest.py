"""Shared fixtures: mock engine state, docker shim on PATH, live loopback servers."""

from __future__ import annotations

import os
import socket
import stat
import sys
import threading
from pathlib import Path

import pytest
import uvicorn

from dockhand.agent import AgentConfig, create_agent_app
from dockhand.mockdocker import seed_state

TEST_AGENT_KEY = "test-agent-key-5f2a"


@pytest.fixture
def mock_state_path(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Seeded mock-engine state file, exported via MOCKDOCKER_STATE."""
    path = tmp_path / "mock-state.json"
    seed_state(path)
    monkeypatch.setenv("MOCKDOCKER_STATE", str(path))
    return path


@pytest.fixture
def docker_shim(tmp_path: Path, monkeypatch: pytest.MonkeyPatch, mock_state_path: Path) -> Path:
    """A `docker` executable on PATH that dispatches to the mock engine."""
    shim_dir = tmp_path / "bin"
    shim_dir.mkdir(exist_ok=True)
    shim = shim_dir / "docker"
    shim.write_text(f'#!/bin/sh\nexec "{sys.executable}" -m dockhand.mockdocker "$@"\n')
    shim.chmod(shim.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    monkeypatch.setenv("PATH", str(shim_dir), prepend=os.pathsep)
    return shim


class ServerThread:
    """Run an ASGI app under uvicorn on an ephemeral loopback port."""

    def __init__(self, app, host: str = "127.0.0.1"):
        self._config = uvicorn.Config(app, host=host, port=0, log_level="warning", access_log=False)
        self.server = uvicorn.Server(self._config)
        self._thread = threading.Thread(target=self.server.run, daemon=True)
        self.host = host
        self.port: int | None = None

    def start(self) -> "ServerThread":
        self._thread.start()
        while not self.server.started:
            if not self._thread.is_alive():
                raise RuntimeError("uvicorn server thread died during startup")
            threading.Event().wait(0.01)
        self.port = self.server.servers[0].sockets[0].getsockname()[1]
        return self

    @property
    def base_url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def stop(self) -> None:
        self.server.should_exit = True
        self._thread.join(timeout=10)


@pytest.fixture
def agent_server(docker_shim: Path):
    """Live agent bound to loopback, executing against the mock engine."""
    config = AgentConfig(shared_key=TEST_AGENT_KEY, docker_bin=str(docker_shim))
    server = ServerThread(create_agent_app(config)).start()
    yield server
    server.stop()


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines: list[tuple[str, str]] = []
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"), ("skipped", "SKIP")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if outcome != "skipped" and getattr(report, "when", "call") != "call":
                continue
            lines.append((nodeid.split("::")[-1], label))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, label in sorted(lines):
            terminalreporter.write_line(f"{label}  {name}")
