"""mock-docker: a stand-in engine CLI backed by a JSON state file.

Supports the subset of the real engine surface the controller issues:
version, info, ps, images, volume ls, start/stop/restart/rm, logs, run.
Output is deterministic for a given (state file, argv) pair; listings
honor --format templates with TAB separators. The hidden --sleep-ms
flag delays execution so tests can force timeouts.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import sys
import time
from pathlib import Path
from typing import Any

from .state import load_state, save_state, state_lock

DEFAULT_STATE_FILE = "mockdocker-state.json"

_TEMPLATE_FIELD_RE = re.compile(r"\{\{\.(\w+)\}\}")

_STATUS_TEXT = {
    "running": "Up (mock)",
    "exited": "Exited (0) (mock)",
    "created": "Created (mock)",
    "paused": "Paused (mock)",
}

CONTAINER_DEFAULT_TEMPLATE = "{{.ID}}\t{{.Names}}\t{{.Image}}\t{{.Status}}"
IMAGE_DEFAULT_TEMPLATE = "{{.ID}}\t{{.Repository}}\t{{.Tag}}\t{{.Size}}"
VOLUME_DEFAULT_TEMPLATE = "{{.Name}}\t{{.Driver}}"


def _render(template: str, values: dict[str, str]) -> str:
    return _TEMPLATE_FIELD_RE.sub(lambda m: values.get(m.group(1), m.group(0)), template)


def _container_values(container: dict[str, Any]) -> dict[str, str]:
    return {
        "ID": container["id"],
        "Names": container["name"],
        "Image": container["image"],
        "Status": _STATUS_TEXT[container["state"]],
    }


def _find_container(state: dict[str, Any], ref: str) -> dict[str, Any] | None:
    for container in state["containers"]:
        if container["id"] == ref or container["name"] == ref:
            return container
    return None


def _fresh_id(state: dict[str, Any], name: str, image: str) -> str:
    # Deterministic per (state, argv): hash the existing ids plus the new spec.
    basis = json.dumps([c["id"] for c in state["containers"]], sort_keys=True) + name + image
    return hashlib.sha256(basis.encode("utf-8")).hexdigest()[:12]


def _pop_option(argv: list[str], flag: str) -> str | None:
    """Remove `flag VALUE` from argv and return VALUE, or None when absent."""
    if flag not in argv:
        return None
    index = argv.index(flag)
    if index + 1 >= len(argv):
        raise ValueError(f"flag {flag} requires a value")
    value = argv[index + 1]
    del argv[index : index + 2]
    return value


def dispatch(argv: list[str], state_path: str | Path | None = None) -> tuple[int, str, str]:
    """Run one engine command. Returns (exit_code, stdout, stderr); never raises."""
    try:
        return _dispatch(list(argv), state_path)
    except Exception as exc:  # contract: errors are exit codes, not crashes
        return 1, "", f"mock-docker: internal error: {exc}\n"


def _dispatch(argv: list[str], state_path: str | Path | None) -> tuple[int, str, str]:
    path = Path(state_path or os.environ.get("MOCKDOCKER_STATE", DEFAULT_STATE_FILE))

    try:
        sleep_ms = _pop_option(argv, "--sleep-ms")
    except ValueError as exc:
        return 1, "", f"mock-docker: {exc}\n"
    if sleep_ms is not None:
        time.sleep(int(sleep_ms) / 1000.0)

    if not argv:
        return 1, "", "mock-docker: unknown command\n"

    command, args = argv[0], argv[1:]
    with state_lock(path):
        state = load_state(path)
        if command == "version":
            return 0, state["version_string"] + "\n", ""
        if command == "info":
            return _cmd_info(state)
        if command == "ps":
            return _cmd_ps(state, args)
        if command == "images":
            return _cmd_images(state, args)
        if command == "volume":
            return _cmd_volume(state, args)
        if command in ("start", "stop", "restart", "rm"):
            return _cmd_lifecycle(state, path, command, args)
        if command == "logs":
            return _cmd_logs(state, args)
        if command == "run":
            return _cmd_run(state, path, args)
    return 1, "", "mock-docker: unknown command\n"


def _cmd_info(state: dict[str, Any]) -> tuple[int, str, str]:
    running = sum(1 for c in state["containers"] if c["state"] == "running")
    lines = [
        f"containers: {len(state['containers'])} (running: {running})",
        f"images: {len(state['images'])}",
        f"volumes: {len(state['volumes'])}",
        f"version: {state['version_string']}",
    ]
    return 0, "\n".join(lines) + "\n", ""


def _cmd_ps(state: dict[str, Any], args: list[str]) -> tuple[int, str, str]:
    args = list(args)
    show_all = False
    while "-a" in args:
        args.remove("-a")
        show_all = True
    try:
        template = _pop_option(args, "--format") or CONTAINER_DEFAULT_TEMPLATE
        name_filter = _pop_option(args, "--filter")
    except ValueError as exc:
        return 1, "", f"mock-docker: {exc}\n"
    if args:
        return 1, "", f"mock-docker: unknown argument: {args[0]}\n"
    rows = state["containers"]
    if not show_all:
        rows = [c for c in rows if c["state"] in ("running", "paused")]
    if name_filter is not None:
        if not name_filter.startswith("name="):
            return 1, "", "mock-docker: only name= filters are supported\n"
        needle = name_filter[len("name=") :]
        rows = [c for c in rows if needle in c["name"]]
    out = "".join(_render(template, _container_values(c)) + "\n" for c in rows)
    return 0, out, ""


def _cmd_images(state: dict[str, Any], args: list[str]) -> tuple[int, str, str]:
    args = list(args)
    try:
        template = _pop_option(args, "--format") or IMAGE_DEFAULT_TEMPLATE
    except ValueError as exc:
        return 1, "", f"mock-docker: {exc}\n"
    if args:
        return 1, "", f"mock-docker: unknown argument: {args[0]}\n"
    out = ""
    for image in state["images"]:
        values = {
            "ID": image["id"],
            "Repository": image["repository"],
            "Tag": image["tag"],
            "Size": image["size_text"],
        }
        out += _render(template, values) + "\n"
    return 0, out, ""


def _cmd_volume(state: dict[str, Any], args: list[str]) -> tuple[int, str, str]:
    args = list(args)
    if not args or args[0] != "ls":
        return 1, "", "mock-docker: unknown command\n"
    args = args[1:]
    try:
        template = _pop_option(args, "--format") or VOLUME_DEFAULT_TEMPLATE
    except ValueError as exc:
        return 1, "", f"mock-docker: {exc}\n"
    if args:
        return 1, "", f"mock-docker: unknown argument: {args[0]}\n"
    out = ""
    for volume in state["volumes"]:
        out += _render(template, {"Name": volume["name"], "Driver": volume["driver"]}) + "\n"
    return 0, out, ""


def _cmd_lifecycle(
    state: dict[str, Any], path: Path, command: str, args: list[str]
) -> tuple[int, str, str]:
    if len(args) != 1:
        return 1, "", f"mock-docker: {command} requires exactly one container\n"
    ref = args[0]
    container = _find_container(state, ref)
    if container is None:
        return 1, "", f"mock-docker: no such container: {ref}\n"

    # Lifecycle graph: created->running (start), running->exited (stop),
    # exited->running (start), restart = stop+start, rm only from exited/created.
    if command == "start":
        if container["state"] in ("created", "exited"):
            container["state"] = "running"
    elif command == "stop":
        if container["state"] == "running":
            container["state"] = "exited"
    elif command == "restart":
        container["state"] = "running"
    elif command == "rm":
        if container["state"] not in ("created", "exited"):
            return 1, "", f"mock-docker: cannot remove container {ref} while it is running\n"
        state["containers"] = [c for c in state["containers"] if c["id"] != container["id"]]
    save_state(path, state)
    return 0, ref + "\n", ""


def _cmd_logs(state: dict[str, Any], args: list[str]) -> tuple[int, str, str]:
    args = list(args)
    try:
        tail = _pop_option(args, "--tail")
    except ValueError as exc:
        return 1, "", f"mock-docker: {exc}\n"
    if len(args) != 1:
        return 1, "", "mock-docker: logs requires exactly one container\n"
    container = _find_container(state, args[0])
    if container is None:
        return 1, "", f"mock-docker: no such container: {args[0]}\n"
    lines = container["logs"]
    if tail is not None:
        try:
            count = int(tail)
        except ValueError:
            return 1, "", f"mock-docker: invalid tail value: {tail}\n"
        if count < 0:
            return 1, "", f"mock-docker: invalid tail value: {tail}\n"
        lines = lines[len(lines) - count :] if count else []
    out = "".join(line + "\n" for line in lines)
    return 0, out, ""


def _cmd_run(state: dict[str, Any], path: Path, args: list[str]) -> tuple[int, str, str]:
    args = list(args)
    try:
        name = _pop_option(args, "--name")
    except ValueError as exc:
        return 1, "", f"mock-docker: {exc}\n"
    if name is None or len(args) != 1:
        return 1, "", "mock-docker: run requires --name NAME IMAGE\n"
    image = args[0]
    if _find_container(state, name) is not None:
        return 1, "", f"mock-docker: container name already in use: {name}\n"
    container = {
        "id": _fresh_id(state, name, image),
        "name": name,
        "image": image,
        "state": "running",
        "logs": [],
    }
    state["containers"].append(container)
    save_state(path, state)
    return 0, container["id"] + "\n", ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = dispatch(sys.argv[1:] if argv is None else argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
