"""Error types shared by the registry, listing parser, and REST layer."""

from __future__ import annotations


class CoreError(Exception):
    """Base class; `code` is the stable machine-readable identifier."""

    code = "internal"

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail


class InvalidAddressError(CoreError):
    code = "invalid_address"


class InvalidPortError(CoreError):
    code = "invalid_port"


class DeviceNotFoundError(CoreError):
    code = "not_found"


class StoreIOError(CoreError):
    code = "io_error"


class CorruptStoreError(CoreError):
    code = "corrupt_store"


class ListingParseError(CoreError):
    """A listing line did not match the expected TAB-separated shape."""

    code = "parse_error"

    def __init__(self, line_no: int, detail: str = ""):
        super().__init__(detail or f"malformed listing line {line_no}")
        self.line_no = line_no
