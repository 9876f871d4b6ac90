"""State file handling for the mock engine.

The state is one JSON document: containers, images, volumes, and the
engine version string. Concurrent invocations serialize on an advisory
lock next to the state file.
"""

from __future__ import annotations

import fcntl
import json
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Any

VERSION_STRING = "mock-docker 1.0"

CONTAINER_STATES = ("created", "running", "exited", "paused")

SEED_STATE: dict[str, Any] = {
    "containers": [
        {
            "id": "f00dfeed0001",
            "name": "web",
            "image": "nginx:latest",
            "state": "running",
            "logs": ["server started", "listening on 80", "ready"],
        },
        {
            "id": "f00dfeed0002",
            "name": "db",
            "image": "postgres:16",
            "state": "exited",
            "logs": ["db init", "db ready", "db stopped"],
        },
    ],
    "images": [
        {"id": "11aa22bb33cc", "repository": "nginx", "tag": "latest", "size_text": "187MB"},
        {"id": "44dd55ee66ff", "repository": "postgres", "tag": "16", "size_text": "431MB"},
    ],
    "volumes": [{"name": "pgdata", "driver": "local"}],
    "version_string": VERSION_STRING,
}


def _normalize(state: dict[str, Any]) -> dict[str, Any]:
    """Fill defaults and drop anything that is not part of the schema."""
    out: dict[str, Any] = {
        "containers": [],
        "images": [],
        "volumes": [],
        "version_string": str(state.get("version_string", VERSION_STRING)),
    }
    for container in state.get("containers", []):
        c_state = container.get("state", "created")
        if c_state not in CONTAINER_STATES:
            c_state = "created"
        out["containers"].append(
            {
                "id": str(container["id"]),
                "name": str(container.get("name", "")),
                "image": str(container.get("image", "")),
                "state": c_state,
                "logs": [str(line) for line in container.get("logs", [])],
            }
        )
    for image in state.get("images", []):
        out["images"].append(
            {
                "id": str(image["id"]),
                "repository": str(image.get("repository", "<none>")),
                "tag": str(image.get("tag", "<none>")),
                "size_text": str(image.get("size_text", "0B")),
            }
        )
    for volume in state.get("volumes", []):
        out["volumes"].append(
            {"name": str(volume["name"]), "driver": str(volume.get("driver", "local"))}
        )
    return out


def load_state(path: str | Path) -> dict[str, Any]:
    """Read the state file, creating it with the fixed seed when absent."""
    path = Path(path)
    if not path.exists():
        save_state(path, SEED_STATE)
        return _normalize(SEED_STATE)
    with path.open("r", encoding="utf-8") as fh:
        return _normalize(json.load(fh))


def save_state(path: str | Path, state: dict[str, Any]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = _normalize(state)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def seed_state(path: str | Path, state: dict[str, Any] | None = None) -> dict[str, Any]:
    """Test helper: write an arbitrary (or the default) state to `path`."""
    document = _normalize(state if state is not None else SEED_STATE)
    save_state(path, document)
    return document


@contextmanager
def state_lock(path: str | Path):
    """Advisory lock serializing concurrent mock invocations on one state file."""
    lock_path = Path(str(path) + ".lock")
    lock_path.parent.mkdir(parents=True, exist_ok=True)
    with lock_path.open("w") as lock_file:
        fcntl.flock(lock_file.fileno(), fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(lock_file.fileno(), fcntl.LOCK_UN)
