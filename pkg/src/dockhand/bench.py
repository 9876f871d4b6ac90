"""Latency/throughput benchmark comparing transports on the same command.

For each concurrency level the harness issues a fixed number of
executions with at most `level` in flight, measures caller-side wall
time per execution, and summarizes with nearest-rank percentiles (the
value at the ceil(p*n)-th position of the sorted samples — no
interpolation, so results are reproducible bit-for-bit). Warmup runs
are executed first and discarded; session establishment costs would
otherwise dominate the first samples.
"""

from __future__ import annotations

import json
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from io import StringIO

from . import transports
from .core.types import CommandRequest, Credentials
from .core.validation import DEFAULT_POLICY, ValidationPolicy, validate_command
from .transports import Endpoint, TransportError

CSV_HEADER = "level,p50_ms,p95_ms,mean_ms,throughput_rps,failures"


class BenchTargetUnreachable(Exception):
    pass


class BenchAllRequestsFailed(Exception):
    pass


@dataclass(frozen=True)
class BenchConfig:
    endpoint: Endpoint
    credentials: Credentials
    command: str
    repetitions: int
    concurrency_levels: tuple[int, ...] = (1,)
    warmup: int = 3
    timeout_ms: int = 30_000
    policy: ValidationPolicy = field(default_factory=lambda: DEFAULT_POLICY)

    def __post_init__(self) -> None:
        if self.repetitions <= 0:
            raise ValueError("repetitions must be positive")
        if not self.concurrency_levels or any(level < 1 for level in self.concurrency_levels):
            raise ValueError("concurrency levels must all be >= 1")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")
        if not validate_command(self.command, self.policy).accepted:
            raise ValueError(f"bench command rejected by policy: {self.command!r}")


@dataclass(frozen=True)
class LevelStats:
    level: int
    samples: tuple[float, ...]  # successful latencies, ms, in completion order
    failures: int
    p50_ms: float
    p95_ms: float
    mean_ms: float
    throughput_rps: float

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "samples": list(self.samples),
            "failures": self.failures,
            "p50_ms": self.p50_ms,
            "p95_ms": self.p95_ms,
            "mean_ms": self.mean_ms,
            "throughput_rps": self.throughput_rps,
        }


@dataclass(frozen=True)
class BenchReport:
    command: str
    transport: str
    repetitions: int
    levels: tuple[LevelStats, ...]

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "transport": self.transport,
            "repetitions": self.repetitions,
            "levels": [level.to_dict() for level in self.levels],
        }


def nearest_rank(samples: list[float], percentile: float) -> float:
    """Value at the ceil(p/100 * n)-th position (1-based) of the sorted samples."""
    if not samples:
        raise ValueError("nearest_rank needs at least one sample")
    if not 0 < percentile <= 100:
        raise ValueError("percentile must be in (0, 100]")
    ordered = sorted(samples)
    rank = math.ceil(percentile / 100.0 * len(ordered))
    return ordered[rank - 1]


def summarize_level(
    level: int, samples: list[float], failures: int, wall_seconds: float
) -> LevelStats:
    if not samples:
        raise BenchAllRequestsFailed(f"all requests failed at concurrency level {level}")
    throughput = len(samples) / wall_seconds if wall_seconds > 0 else 0.0
    return LevelStats(
        level=level,
        samples=tuple(samples),
        failures=failures,
        p50_ms=nearest_rank(samples, 50),
        p95_ms=nearest_rank(samples, 95),
        mean_ms=sum(samples) / len(samples),
        throughput_rps=throughput,
    )


def run_bench(config: BenchConfig) -> BenchReport:
    """Execute the configured sweep. Aborts before sampling when the target
    does not answer a probe."""
    status = transports.probe(config.endpoint, config.credentials)
    if not status.reachable:
        raise BenchTargetUnreachable(
            f"target probe failed: {status.error_kind.value if status.error_kind else 'unknown'}"
        )

    verdict = validate_command(config.command, config.policy)
    request = CommandRequest(raw=verdict.normalized, validated=True, timeout_ms=config.timeout_ms)

    def one_exec(session: transports.Session) -> float | None:
        started = time.perf_counter()
        try:
            session.exec(request)
        except TransportError:
            return None
        return (time.perf_counter() - started) * 1000.0

    if config.warmup:
        session = transports.connect(config.endpoint, config.credentials)
        try:
            for _ in range(config.warmup):
                one_exec(session)
        finally:
            session.close()

    levels: list[LevelStats] = []
    for level in config.concurrency_levels:
        sessions = threading.local()
        opened: list[transports.Session] = []
        opened_lock = threading.Lock()

        def task() -> float | None:
            # Sessions are not shareable across threads: one per worker.
            session = getattr(sessions, "session", None)
            if session is None:
                try:
                    session = transports.connect(config.endpoint, config.credentials)
                except TransportError:
                    return None
                sessions.session = session
                with opened_lock:
                    opened.append(session)
            return one_exec(session)

        started = time.perf_counter()
        with ThreadPoolExecutor(max_workers=level) as pool:
            outcomes = list(pool.map(lambda _: task(), range(config.repetitions)))
        wall_seconds = time.perf_counter() - started
        for session in opened:
            session.close()

        samples = [ms for ms in outcomes if ms is not None]
        failures = len(outcomes) - len(samples)
        levels.append(summarize_level(level, samples, failures, wall_seconds))

    return BenchReport(
        command=config.command,
        transport=config.endpoint.transport.value,
        repetitions=config.repetitions,
        levels=tuple(levels),
    )


def compare(report_a: BenchReport, report_b: BenchReport) -> list[dict]:
    """Per-level deltas (a minus b); latency and throughput winners are
    decided independently per metric."""
    by_level_b = {level.level: level for level in report_b.levels}
    rows = []
    for level_a in report_a.levels:
        level_b = by_level_b.get(level_a.level)
        if level_b is None:
            continue
        rows.append(
            {
                "level": level_a.level,
                "delta_p50_ms": level_a.p50_ms - level_b.p50_ms,
                "delta_p95_ms": level_a.p95_ms - level_b.p95_ms,
                "delta_throughput_rps": level_a.throughput_rps - level_b.throughput_rps,
                "latency_winner": _winner(level_a.p50_ms, level_b.p50_ms, lower_is_better=True),
                "throughput_winner": _winner(
                    level_a.throughput_rps, level_b.throughput_rps, lower_is_better=False
                ),
            }
        )
    return rows


def _winner(a: float, b: float, *, lower_is_better: bool) -> str:
    if a == b:
        return "tie"
    if (a < b) == lower_is_better:
        return "a"
    return "b"


def emit(report: BenchReport, format: str) -> str:
    """Serialize a report as 'json' (round-trippable) or 'csv' (aggregates)."""
    _check_emittable(report)
    if format == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if format == "csv":
        out = StringIO()
        out.write(CSV_HEADER + "\n")
        for level in report.levels:
            out.write(
                f"{level.level},{level.p50_ms!r},{level.p95_ms!r},"
                f"{level.mean_ms!r},{level.throughput_rps!r},{level.failures}\n"
            )
        return out.getvalue()
    raise ValueError(f"unknown format: {format!r}")


def report_from_json(text: str) -> BenchReport:
    data = json.loads(text)
    levels = tuple(
        LevelStats(
            level=entry["level"],
            samples=tuple(entry["samples"]),
            failures=entry["failures"],
            p50_ms=entry["p50_ms"],
            p95_ms=entry["p95_ms"],
            mean_ms=entry["mean_ms"],
            throughput_rps=entry["throughput_rps"],
        )
        for entry in data["levels"]
    )
    return BenchReport(
        command=data["command"],
        transport=data["transport"],
        repetitions=data["repetitions"],
        levels=levels,
    )


def _check_emittable(report: BenchReport) -> None:
    if not report.levels:
        raise ValueError("report has no levels")
    for level in report.levels:
        if not level.samples:
            raise ValueError(f"level {level.level} has no samples")
        if len(level.samples) + level.failures != report.repetitions:
            raise ValueError(f"level {level.level} violates samples+failures=repetitions")
