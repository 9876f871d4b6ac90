"""Command validation policy: prefix check, subcommand allowlist, metacharacter ban.

Accepted commands cross a shell boundary on the SSH path, so the policy
rejects anything that could change meaning under a POSIX shell: command
separators, pipes, redirections, substitution characters, and backslash
escapes are all banned outright. What remains is tokenized with shell
quoting rules and re-emitted in a canonical quoted form, so the local
argv path, the HTTP agent, and a remote shell all see identical words.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass

REASON_EMPTY = "empty"
REASON_NOT_DOCKER = "not_docker"
REASON_SUBCOMMAND_DENIED = "subcommand_denied"
REASON_FORBIDDEN_CHARACTER = "forbidden_character"
REASON_TOO_LONG = "too_long"

DEFAULT_ALLOWLIST = frozenset(
    {
        "ps",
        "images",
        "start",
        "stop",
        "restart",
        "rm",
        "rmi",
        "run",
        "pull",
        "logs",
        "inspect",
        "volume",
        "version",
        "info",
        "stats",
    }
)

# ; | & run second commands, ` and $ substitute, < > redirect, newline
# separates, backslash escapes the quoting we rely on.
DEFAULT_FORBIDDEN = frozenset({";", "|", "&", "`", "$", "<", ">", "\n", "\\"})

DEFAULT_MAX_LENGTH = 4096


@dataclass(frozen=True)
class ValidationPolicy:
    allowlisted_subcommands: frozenset[str] = DEFAULT_ALLOWLIST
    forbidden_characters: frozenset[str] = DEFAULT_FORBIDDEN
    max_length: int = DEFAULT_MAX_LENGTH

    def __post_init__(self) -> None:
        if not self.allowlisted_subcommands:
            raise ValueError("allowlist must not be empty")
        if self.max_length <= 0:
            raise ValueError("max_length must be positive")


DEFAULT_POLICY = ValidationPolicy()


@dataclass(frozen=True)
class Verdict:
    """Outcome of validate_command. Rejection is a value, not an exception."""

    accepted: bool
    normalized: str = ""
    reason: str = ""

    @classmethod
    def ok(cls, normalized: str) -> "Verdict":
        return cls(accepted=True, normalized=normalized)

    @classmethod
    def rejected(cls, reason: str) -> "Verdict":
        return cls(accepted=False, reason=reason)


def validate_command(raw: str, policy: ValidationPolicy = DEFAULT_POLICY) -> Verdict:
    """Check an untrusted command string against the policy.

    Accepted verdicts carry the canonical form: tokens separated by
    single spaces, each token shell-quoted when it needs to be. The
    canonical form validates to itself (idempotence), so it can be
    stored and re-checked.
    """
    if not raw or not raw.strip():
        return Verdict.rejected(REASON_EMPTY)
    if len(raw) > policy.max_length:
        return Verdict.rejected(REASON_TOO_LONG)
    for ch in raw:
        if ch in policy.forbidden_characters:
            return Verdict.rejected(REASON_FORBIDDEN_CHARACTER)
    try:
        tokens = shlex.split(raw)
    except ValueError:
        # unbalanced quoting: not representable safely on any transport
        return Verdict.rejected(REASON_FORBIDDEN_CHARACTER)
    if not tokens:
        return Verdict.rejected(REASON_EMPTY)
    if tokens[0] != "docker":
        return Verdict.rejected(REASON_NOT_DOCKER)
    if len(tokens) < 2 or tokens[1] not in policy.allowlisted_subcommands:
        return Verdict.rejected(REASON_SUBCOMMAND_DENIED)
    normalized = " ".join(shlex.quote(token) for token in tokens)
    if len(normalized) > policy.max_length:
        return Verdict.rejected(REASON_TOO_LONG)
    return Verdict.ok(normalized)


def validated_request(
    raw: str,
    *,
    timeout_ms: int = 30_000,
    policy: ValidationPolicy = DEFAULT_POLICY,
):
    """Validate `raw` and build a CommandRequest from the canonical form.

    Raises ValueError carrying the rejection reason when the policy
    refuses the command; this is the only sanctioned way to obtain a
    request with validated=True.
    """
    from .types import CommandRequest

    verdict = validate_command(raw, policy)
    if not verdict.accepted:
        raise ValueError(f"command rejected: {verdict.reason}")
    return CommandRequest(raw=verdict.normalized, validated=True, timeout_ms=timeout_ms)
