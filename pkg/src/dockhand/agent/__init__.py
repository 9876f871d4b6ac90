"""Host-side HTTP command agent."""

from .app import DEFAULT_TIMEOUT_MS, KEY_HEADER, TIMEOUT_CAP_MS, AgentConfig, create_agent_app
from .executor import CommandExecutor, ExecOutcome, ExecTimeout, ExecutorBusy

__all__ = [
    "AgentConfig",
    "CommandExecutor",
    "DEFAULT_TIMEOUT_MS",
    "ExecOutcome",
    "ExecTimeout",
    "ExecutorBusy",
    "KEY_HEADER",
    "TIMEOUT_CAP_MS",
    "create_agent_app",
]
