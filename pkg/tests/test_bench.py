"""Bench harness: percentile math against an oracle, conservation, emit formats."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dockhand.bench import (
    CSV_HEADER,
    BenchAllRequestsFailed,
    BenchConfig,
    BenchReport,
    BenchTargetUnreachable,
    LevelStats,
    compare,
    emit,
    nearest_rank,
    report_from_json,
    run_bench,
    summarize_level,
)
from dockhand.core import Credentials, TransportKind
from dockhand.transports import Endpoint
from tests.conftest import free_port

LOCAL = Endpoint(address="localhost", port=0, transport=TransportKind.LOCAL)


def oracle_percentile(samples: list[float], percentile: float) -> float:
    """Independent formulation: smallest sample whose cumulative share of the
    distribution reaches the requested percentile."""
    ordered = sorted(samples)
    threshold = percentile / 100.0 * len(ordered)
    count = 0
    for value in ordered:
        count += 1
        if count >= threshold:
            return value
    return ordered[-1]


def make_level(samples, failures=0, level=1, wall=1.0) -> LevelStats:
    return summarize_level(level, list(samples), failures, wall)


def make_report(levels, repetitions) -> BenchReport:
    return BenchReport(command="docker ps", transport="local", repetitions=repetitions, levels=tuple(levels))


# ---- percentiles ---------------------------------------------------------------


def test_p50_spec_example():
    assert nearest_rank([5, 1, 9, 3, 7], 50) == 5


def test_percentiles_on_singleton():
    assert nearest_rank([42.0], 50) == 42.0
    assert nearest_rank([42.0], 95) == 42.0


def test_percentile_rejects_empty_and_bad_p():
    with pytest.raises(ValueError):
        nearest_rank([], 50)
    with pytest.raises(ValueError):
        nearest_rank([1.0], 0)
    with pytest.raises(ValueError):
        nearest_rank([1.0], 101)


@settings(max_examples=150)
@given(
    st.lists(st.floats(min_value=0, max_value=1e6, allow_nan=False), min_size=1, max_size=500),
    st.sampled_from([1, 25, 50, 75, 90, 95, 99, 100]),
)
def test_nearest_rank_matches_oracle(samples, percentile):
    assert nearest_rank(samples, percentile) == oracle_percentile(samples, percentile)


@settings(max_examples=100)
@given(
    st.lists(st.integers(min_value=0, max_value=10_000).map(float), min_size=1, max_size=200),
    st.integers(min_value=1, max_value=5_000).map(float),
)
def test_constant_shift_moves_stats_by_exactly_that(samples, delta):
    base = make_level(samples)
    shifted = make_level([value + delta for value in samples])
    assert shifted.p50_ms - base.p50_ms == delta
    assert shifted.p95_ms - base.p95_ms == delta
    assert shifted.mean_ms - base.mean_ms == pytest.approx(delta, abs=1e-6)


def test_p50_never_exceeds_p95():
    for samples in ([1.0], [3.0, 1.0], list(map(float, range(100, 0, -1)))):
        stats = make_level(samples)
        assert stats.p50_ms <= stats.p95_ms


# ---- summaries / conservation ----------------------------------------------------


def test_summarize_counts_failures():
    stats = summarize_level(4, [10.0, 20.0], failures=3, wall_seconds=2.0)
    assert stats.failures == 3
    assert len(stats.samples) == 2
    assert stats.throughput_rps == 1.0


def test_summarize_all_failures_is_an_error():
    with pytest.raises(BenchAllRequestsFailed):
        summarize_level(1, [], failures=5, wall_seconds=1.0)


# ---- emit ---------------------------------------------------------------------------


def test_csv_header_and_rows():
    report = make_report([make_level([5.0, 1.0, 9.0, 3.0, 7.0])], repetitions=5)
    text = emit(report, "csv")
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert lines[1].startswith("1,5.0,9.0,5.0,")
    assert lines[1].endswith(",0")


def test_json_round_trip():
    report = make_report(
        [make_level([5.0, 1.0, 9.0], failures=2, level=1), make_level([2.5] * 5, level=8)],
        repetitions=5,
    )
    assert report_from_json(emit(report, "json")) == report


def test_emit_refuses_empty_reports():
    with pytest.raises(ValueError):
        emit(make_report([], repetitions=5), "json")
    lopsided = BenchReport(
        command="docker ps",
        transport="local",
        repetitions=5,
        levels=(
            LevelStats(level=1, samples=(), failures=5, p50_ms=0, p95_ms=0, mean_ms=0, throughput_rps=0),
        ),
    )
    with pytest.raises(ValueError):
        emit(lopsided, "json")


def test_emit_refuses_conservation_violation():
    report = make_report([make_level([1.0, 2.0], failures=0)], repetitions=5)
    with pytest.raises(ValueError):
        emit(report, "csv")


def test_emit_unknown_format():
    report = make_report([make_level([1.0])], repetitions=1)
    with pytest.raises(ValueError):
        emit(report, "yaml")


# ---- compare -------------------------------------------------------------------------


def test_compare_identical_reports_is_a_tie():
    report = make_report([make_level([5.0, 6.0])], repetitions=2)
    rows = compare(report, report)
    assert rows == [
        {
            "level": 1,
            "delta_p50_ms": 0.0,
            "delta_p95_ms": 0.0,
            "delta_throughput_rps": 0.0,
            "latency_winner": "tie",
            "throughput_winner": "tie",
        }
    ]


def test_compare_latency_winner():
    fast = make_report([make_level([10.0, 10.0])], repetitions=2)
    slow = make_report([make_level([20.0, 20.0])], repetitions=2)
    row = compare(fast, slow)[0]
    assert row["latency_winner"] == "a"
    assert row["delta_p50_ms"] == -10.0


def test_throughput_winner_independent_of_latency():
    # a: lower latency but lower throughput; b wins throughput, a wins latency.
    a = make_report([make_level([10.0] * 4, wall=8.0)], repetitions=4)
    b = make_report([make_level([20.0] * 4, wall=2.0)], repetitions=4)
    row = compare(a, b)[0]
    assert row["latency_winner"] == "a"
    assert row["throughput_winner"] == "b"


# ---- run_bench -------------------------------------------------------------------------


def test_config_validates_command():
    with pytest.raises(ValueError):
        BenchConfig(
            endpoint=LOCAL,
            credentials=Credentials.none(),
            command="rm -rf /",
            repetitions=5,
        )


def test_run_bench_local(docker_shim):
    config = BenchConfig(
        endpoint=LOCAL,
        credentials=Credentials.none(),
        command="docker version",
        repetitions=10,
        concurrency_levels=(1,),
        warmup=1,
    )
    report = run_bench(config)
    assert len(report.levels) == 1
    stats = report.levels[0]
    assert len(stats.samples) == 10
    assert stats.failures == 0
    assert stats.p50_ms <= stats.p95_ms
    assert stats.throughput_rps > 0


def test_run_bench_unreachable_target_aborts_before_sampling():
    config = BenchConfig(
        endpoint=Endpoint(address="127.0.0.1", port=free_port(), transport=TransportKind.HTTP_AGENT),
        credentials=Credentials.agent("k"),
        command="docker ps",
        repetitions=3,
    )
    with pytest.raises(BenchTargetUnreachable):
        run_bench(config)


def test_run_bench_all_failures(tmp_path, monkeypatch):
    monkeypatch.setenv("PATH", str(tmp_path))  # no docker anywhere
    config = BenchConfig(
        endpoint=LOCAL,
        credentials=Credentials.none(),
        command="docker version",
        repetitions=3,
        warmup=0,
    )
    with pytest.raises(BenchAllRequestsFailed):
        run_bench(config)
