"""Device registry: thread-safe in-memory store with JSON file persistence.

The store file is a single UTF-8 JSON document, schema
{"version": 1, "devices": [...]}, written atomically (temp file +
rename) so a crash mid-save never corrupts an existing store.
Credentials are never part of the store.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from pathlib import Path

from .errors import CorruptStoreError, DeviceNotFoundError, InvalidAddressError, InvalidPortError, StoreIOError
from .types import DeviceRecord, DeviceStatus, TransportKind, utc_now

STORE_VERSION = 1


class RegistryStore:
    """Concurrent-reader friendly device store; writers are exclusive."""

    def __init__(self, devices: list[DeviceRecord] | None = None):
        self._lock = threading.RLock()
        self._devices: dict[str, DeviceRecord] = {}
        for record in devices or []:
            if record.id in self._devices:
                raise ValueError(f"duplicate device id: {record.id}")
            self._devices[record.id] = record

    def add(self, name: str, address: str, port: int, transport: TransportKind) -> DeviceRecord:
        if not address or any(ch.isspace() for ch in address):
            raise InvalidAddressError(f"invalid address: {address!r}")
        if not isinstance(port, int) or isinstance(port, bool) or not 1 <= port <= 65535:
            raise InvalidPortError(f"port out of range: {port!r}")
        record = DeviceRecord(
            id=uuid.uuid4().hex,
            name=name,
            address=address,
            port=port,
            transport=TransportKind(transport),
            created_at=utc_now(),
        )
        with self._lock:
            self._devices[record.id] = record
        return record

    def list(self) -> list[DeviceRecord]:
        with self._lock:
            return sorted(self._devices.values(), key=lambda d: (d.created_at, d.id))

    def get(self, device_id: str) -> DeviceRecord:
        with self._lock:
            try:
                return self._devices[device_id]
            except KeyError:
                raise DeviceNotFoundError(f"no device with id {device_id}") from None

    def remove(self, device_id: str) -> DeviceRecord:
        with self._lock:
            try:
                return self._devices.pop(device_id)
            except KeyError:
                raise DeviceNotFoundError(f"no device with id {device_id}") from None

    def set_status(self, device_id: str, status: DeviceStatus) -> DeviceRecord:
        with self._lock:
            record = self.get(device_id)
            record.last_status = status
            return record

    def __len__(self) -> int:
        with self._lock:
            return len(self._devices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegistryStore):
            return NotImplemented
        return self.list() == other.list()

    def save(self, path: str | Path) -> None:
        path = Path(path)
        document = {"version": STORE_VERSION, "devices": [d.to_dict() for d in self.list()]}
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=".store-", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as tmp:
                    json.dump(document, tmp, indent=2)
                    tmp.write("\n")
                os.replace(tmp_name, path)
            except BaseException:
                try:
                    os.unlink(tmp_name)
                except OSError:
                    pass
                raise
        except OSError as exc:
            raise StoreIOError(f"cannot write store {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "RegistryStore":
        path = Path(path)
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise StoreIOError(f"cannot read store {path}: {exc}") from exc
        try:
            document = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise CorruptStoreError(f"store {path} is not a UTF-8 JSON document: {exc}") from exc
        if not isinstance(document, dict) or document.get("version") != STORE_VERSION:
            raise CorruptStoreError(f"store {path} has unsupported schema")
        raw_devices = document.get("devices")
        if not isinstance(raw_devices, list):
            raise CorruptStoreError(f"store {path} lacks a devices list")
        devices = []
        for entry in raw_devices:
            try:
                devices.append(DeviceRecord.from_dict(entry))
            except (KeyError, TypeError, ValueError) as exc:
                raise CorruptStoreError(f"store {path} has a malformed device entry: {exc}") from exc
        try:
            return cls(devices)
        except ValueError as exc:
            raise CorruptStoreError(str(exc)) from exc
