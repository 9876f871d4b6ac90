"""Operator-facing REST control plane."""

from .app import (
    CONTAINER_ID_RE,
    LOGS_TAIL_DEFAULT,
    LOGS_TAIL_MAX,
    TRANSPORT_ERROR_MAP,
    ApiFault,
    ControllerConfig,
    create_controller_app,
)
from .queues import DeviceQueues, DeviceQueueTimeout

__all__ = [
    "ApiFault",
    "CONTAINER_ID_RE",
    "ControllerConfig",
    "DeviceQueueTimeout",
    "DeviceQueues",
    "LOGS_TAIL_DEFAULT",
    "LOGS_TAIL_MAX",
    "TRANSPORT_ERROR_MAP",
    "create_controller_app",
]
