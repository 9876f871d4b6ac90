"""Core domain: types, validation policy, device registry, listing parser."""

from .errors import (
    CoreError,
    CorruptStoreError,
    DeviceNotFoundError,
    InvalidAddressError,
    InvalidPortError,
    ListingParseError,
    StoreIOError,
)
from .listing import ListingKind, build_listing_command, derive_container_state, parse_listing
from .registry import RegistryStore
from .types import (
    CommandRequest,
    CommandResult,
    ContainerRecord,
    ContainerState,
    CredentialKind,
    Credentials,
    DeviceRecord,
    DeviceStatus,
    ImageRecord,
    TransportKind,
    VolumeRecord,
    utc_now,
)
from .validation import (
    DEFAULT_POLICY,
    REASON_EMPTY,
    REASON_FORBIDDEN_CHARACTER,
    REASON_NOT_DOCKER,
    REASON_SUBCOMMAND_DENIED,
    REASON_TOO_LONG,
    ValidationPolicy,
    Verdict,
    validate_command,
    validated_request,
)

__all__ = [
    "CommandRequest",
    "CommandResult",
    "ContainerRecord",
    "ContainerState",
    "CoreError",
    "CorruptStoreError",
    "CredentialKind",
    "Credentials",
    "DEFAULT_POLICY",
    "DeviceNotFoundError",
    "DeviceRecord",
    "DeviceStatus",
    "ImageRecord",
    "InvalidAddressError",
    "InvalidPortError",
    "ListingKind",
    "ListingParseError",
    "REASON_EMPTY",
    "REASON_FORBIDDEN_CHARACTER",
    "REASON_NOT_DOCKER",
    "REASON_SUBCOMMAND_DENIED",
    "REASON_TOO_LONG",
    "RegistryStore",
    "StoreIOError",
    "TransportKind",
    "ValidationPolicy",
    "Verdict",
    "VolumeRecord",
    "build_listing_command",
    "derive_container_state",
    "parse_listing",
    "utc_now",
    "validate_command",
    "validated_request",
]
