"""Build machine-readable listing commands and parse their output.

Listings use the engine's --format template flag with a literal TAB
between fields instead of scraping aligned columns; container names and
status text may contain spaces, so TAB is the only safe separator.
"""

from __future__ import annotations

import re
import shlex
from enum import Enum

from .errors import ListingParseError
from .types import ContainerRecord, ContainerState, ImageRecord, VolumeRecord


class ListingKind(str, Enum):
    CONTAINERS_ALL = "containers_all"
    IMAGES = "images"
    VOLUMES = "volumes"


_CONTAINER_TEMPLATE = "{{.ID}}\t{{.Names}}\t{{.Image}}\t{{.Status}}"
_IMAGE_TEMPLATE = "{{.ID}}\t{{.Repository}}\t{{.Tag}}\t{{.Size}}"
_VOLUME_TEMPLATE = "{{.Name}}\t{{.Driver}}"

_FILTER_RE = re.compile(r"^[A-Za-z0-9_.-]+$")

_FIELD_COUNT = {
    ListingKind.CONTAINERS_ALL: 4,
    ListingKind.IMAGES: 4,
    ListingKind.VOLUMES: 2,
}


def build_listing_command(kind: ListingKind, container_filter: str | None = None) -> str:
    """Return the canonical (already validate-accepted) listing command."""
    if kind is ListingKind.CONTAINERS_ALL:
        parts = ["docker", "ps", "-a", "--format", _CONTAINER_TEMPLATE]
        if container_filter is not None:
            if not _FILTER_RE.match(container_filter):
                raise ValueError(f"unsafe container filter: {container_filter!r}")
            parts += ["--filter", f"name={container_filter}"]
    elif kind is ListingKind.IMAGES:
        parts = ["docker", "images", "--format", _IMAGE_TEMPLATE]
    elif kind is ListingKind.VOLUMES:
        parts = ["docker", "volume", "ls", "--format", _VOLUME_TEMPLATE]
    else:
        raise ValueError(f"unknown listing kind: {kind}")
    return " ".join(shlex.quote(part) for part in parts)


def derive_container_state(status: str) -> ContainerState:
    if status.startswith("Up"):
        return ContainerState.RUNNING
    if status.startswith("Exited"):
        return ContainerState.EXITED
    if status.startswith("Created"):
        return ContainerState.CREATED
    if status.startswith("Paused"):
        return ContainerState.PAUSED
    return ContainerState.OTHER


def parse_listing(
    kind: ListingKind, text: str
) -> list[ContainerRecord] | list[ImageRecord] | list[VolumeRecord]:
    """Parse stdout of the matching build_listing_command run.

    One record per non-empty line, fields split on TAB. Raises
    ListingParseError (with the 1-based line number) on a line whose
    field count is wrong or whose identifying field is empty.
    """
    expected = _FIELD_COUNT[kind]
    records: list = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != expected:
            raise ListingParseError(
                line_no, f"line {line_no}: expected {expected} fields, got {len(fields)}"
            )
        if not fields[0]:
            raise ListingParseError(line_no, f"line {line_no}: empty identifier field")
        if kind is ListingKind.CONTAINERS_ALL:
            cid, name, image, status = fields
            records.append(
                ContainerRecord(
                    container_id=cid,
                    name=name,
                    image=image,
                    status=status,
                    state=derive_container_state(status),
                )
            )
        elif kind is ListingKind.IMAGES:
            image_id, repository, tag, size_text = fields
            records.append(
                ImageRecord(image_id=image_id, repository=repository, tag=tag, size_text=size_text)
            )
        else:
            volume_name, driver = fields
            records.append(VolumeRecord(volume_name=volume_name, driver=driver))
    return records
