"""Experiment drivers behind the CLI: store comparisons, hasher accuracy
curves, and the enumeration oracle suite.

Every run is fully determined by its config seed; repetition and sweep
seeds are derived, never drawn from global state. Timing is the one
exception and can be disabled (timed=False) for byte-stable output.
"""

from __future__ import annotations

import statistics
import time
from collections import deque
from dataclasses import dataclass, replace
from typing import Sequence

from .core_model import (
    OracleCheck,
    check_collision_probability_exact,
    check_distance_lower_bound,
    check_grouping_ratio,
    check_hamming_manhattan_equivalence,
    check_probability_monotonicity,
)
from .kv_store import PagedStore
from .lsh import (
    BitSamplingHasher,
    LshConfig,
    StaticHasher,
    TunableLsh,
    unoptimized_lsh,
)
from .minhash import mix64
from .workload import Trace, WorkloadSpec, generate

import random

STORE_KINDS = ("tunable", "static", "bit-sampling")
HASHER_KINDS = ("tunable", "unoptimized", "bit-sampling", "static")

STORE_BENCH_HEADER = (
    "parameter",
    "value",
    "store",
    "repetitions",
    "queries",
    "mean_fetch_ns",
    "mean_tune_ns",
    "mean_move_ns",
    "mean_pages_per_query",
    "mean_moves_per_query",
)
LSH_BENCH_HEADER = (
    "parameter",
    "value",
    "hasher",
    "repetitions",
    "conditioned_pairs",
    "probability",
    "theta",
    "x",
)

SWEEPABLE_WORKLOAD = (
    "records_per_query",
    "record_count",
    "record_size",
    "uniqueness_100",
)


@dataclass(frozen=True)
class ExperimentConfig:
    parameter: str
    values: tuple
    workload: WorkloadSpec
    k: int = 192
    b: int = 48
    repetitions: int = 20
    seed: int = 0
    # store benchmarks
    page_size: int = 4096
    fill: float = 0.67
    stores: tuple[str, ...] = STORE_KINDS
    timed: bool = True
    # accuracy benchmarks
    epsilon: int = 4096
    hashers: tuple[str, ...] = HASHER_KINDS
    theta: float = 0.2
    x: float = 0.1
    pairs_per_query: int = 32
    warmup: int | None = None

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a sweep needs at least one value")
        if len(set(self.values)) != len(self.values):
            raise ValueError("sweep values must be distinct")
        if self.parameter not in SWEEPABLE_WORKLOAD + ("b",):
            raise ValueError(f"cannot sweep {self.parameter!r}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        if not 0.0 < self.fill <= 1.0:
            raise ValueError("fill must lie in (0, 1]")
        for kind in self.stores:
            if kind not in STORE_KINDS:
                raise ValueError(f"unknown store kind {kind!r}")
        for kind in self.hashers:
            if kind not in HASHER_KINDS:
                raise ValueError(f"unknown hasher kind {kind!r}")


def derive_seed(*parts: int) -> int:
    h = 0
    for p in parts:
        h = mix64(h ^ mix64(p))
    return h


def _swept_spec(config: ExperimentConfig, value) -> tuple[WorkloadSpec, int]:
    """Apply one sweep value; returns the workload and the effective b."""
    if config.parameter == "b":
        return config.workload, int(value)
    return replace(config.workload, **{config.parameter: int(value)}), config.b


def pages_for(record_count: int, page_size: int, record_size: int, fill: float) -> int:
    capacity = page_size // record_size
    if capacity < 1:
        raise ValueError("record does not fit in a page")
    return max(1, -(-record_count // max(1, int(capacity * fill))))


def build_store(
    kind: str,
    lsh_config: LshConfig,
    *,
    page_size: int,
    record_size: int,
    seed: int,
    timed: bool = True,
) -> PagedStore:
    if kind == "tunable":
        hasher = TunableLsh(lsh_config, seed=seed)
    elif kind == "static":
        hasher = StaticHasher(lsh_config.epsilon, seed=seed)
    elif kind == "bit-sampling":
        hasher = BitSamplingHasher(
            lsh_config.k,
            lsh_config.epsilon,
            num_bits=min(2 * lsh_config.b, lsh_config.k),
            seed=seed,
        )
    else:
        raise ValueError(f"unknown store kind {kind!r}")
    return PagedStore(
        hasher,
        page_size=page_size,
        record_size=record_size,
        clock=time.perf_counter_ns if timed else None,
    )


def load_records(store: PagedStore, record_count: int, record_size: int) -> None:
    # stripe the initial load so every page keeps headroom at the configured
    # fill; relocation needs free slots near each target to make progress
    for key in range(record_count):
        stamp = key.to_bytes(8, "little")
        payload = (stamp + bytes(record_size))[:record_size]
        store.put(key, payload, page=key * store.epsilon // record_count)


def replay_store(store: PagedStore, trace: Trace) -> None:
    for q in trace:
        store.begin_query()
        for pos in q.positions:
            store.get(pos)
        store.end_query()


def _mean(values: list[int | float | None]) -> float | None:
    concrete = [v for v in values if v is not None]
    if not concrete or len(concrete) != len(values):
        return None
    return statistics.fmean(concrete)


def run_store_benchmark(config: ExperimentConfig) -> list[list]:
    """Rows of STORE_BENCH_HEADER values; numeric fields unformatted."""
    if config.parameter == "b":
        raise ValueError("store benchmark sweeps workload parameters only")
    rows: list[list] = []
    for vi, value in enumerate(config.values):
        spec, b = _swept_spec(config, value)
        per_store: dict[str, dict[str, list]] = {
            kind: {"fetch": [], "tune": [], "move": [], "pages": [], "moves": []}
            for kind in config.stores
        }
        for rep in range(config.repetitions):
            rep_seed = derive_seed(config.seed, vi, rep)
            trace = generate(replace(spec, seed=rep_seed))
            epsilon = pages_for(
                spec.record_count, config.page_size, spec.record_size, config.fill
            )
            lsh_config = LshConfig(
                k=config.k, b=b, epsilon=epsilon, omega=spec.record_count
            )
            for kind in config.stores:
                store = build_store(
                    kind,
                    lsh_config,
                    page_size=config.page_size,
                    record_size=spec.record_size,
                    seed=derive_seed(rep_seed, STORE_KINDS.index(kind)),
                    timed=config.timed,
                )
                load_records(store, spec.record_count, spec.record_size)
                replay_store(store, trace)
                metrics = store.metrics()
                acc = per_store[kind]
                acc["fetch"].append(_mean([m.fetch_ns for m in metrics]))
                acc["tune"].append(_mean([m.tune_ns for m in metrics]))
                acc["move"].append(_mean([m.move_ns for m in metrics]))
                acc["pages"].append(
                    statistics.fmean(m.pages_touched for m in metrics)
                )
                acc["moves"].append(statistics.fmean(m.moves for m in metrics))
        for kind in config.stores:
            acc = per_store[kind]
            rows.append(
                [
                    config.parameter,
                    value,
                    kind,
                    config.repetitions,
                    spec.num_queries,
                    _mean(acc["fetch"]),
                    _mean(acc["tune"]),
                    _mean(acc["move"]),
                    statistics.fmean(acc["pages"]),
                    statistics.fmean(acc["moves"]),
                ]
            )
    return rows


def build_hasher(kind: str, lsh_config: LshConfig, *, seed: int):
    if kind == "tunable":
        return TunableLsh(lsh_config, seed=seed)
    if kind == "unoptimized":
        return unoptimized_lsh(lsh_config)
    if kind == "bit-sampling":
        return BitSamplingHasher(
            lsh_config.k,
            lsh_config.epsilon,
            num_bits=min(2 * lsh_config.b, lsh_config.k),
            seed=seed,
        )
    if kind == "static":
        return StaticHasher(lsh_config.epsilon, seed=seed)
    raise ValueError(f"unknown hasher kind {kind!r}")


def replay_accuracy(
    trace: Trace,
    hashers: dict[str, object],
    *,
    k: int,
    epsilon: int,
    theta: float,
    x: float,
    pairs_per_query: int,
    warmup: int,
    rng: random.Random,
) -> dict[str, tuple[int, int]]:
    """Hits and conditioned-pair counts per hasher.

    After each tuned query past warmup, samples record pairs uniformly from
    the records seen within the last k queries, keeps those whose true
    windowed access distance is at most x (normalized by k), and scores a
    hit when the page distance is at most theta (normalized by epsilon-1).
    The same sampled pairs are scored against every hasher.
    """
    if epsilon < 2:
        raise ValueError("accuracy normalization needs epsilon >= 2")
    times: dict[int, deque[int]] = {}
    window: deque[tuple[int, ...]] = deque(maxlen=k)
    counts: dict[str, list[int]] = {name: [0, 0] for name in hashers}

    def window_set(pos: int, now: int) -> frozenset[int]:
        dq = times.get(pos)
        if dq is None:
            return frozenset()
        floor = now - k + 1
        while dq and dq[0] < floor:
            dq.popleft()
        return frozenset(dq)

    for q in trace:
        for hasher in hashers.values():
            hasher.tune(q)
        for pos in q.positions:
            times.setdefault(pos, deque()).append(q.t)
        window.append(q.positions)
        if q.t < warmup:
            continue
        seen = sorted({pos for qp in window for pos in qp})
        if len(seen) < 2:
            continue
        for _ in range(pairs_per_query):
            r1, r2 = rng.sample(seen, 2)
            delta = len(window_set(r1, q.t) ^ window_set(r2, q.t))
            if delta > x * k:
                continue
            for name, hasher in hashers.items():
                counts[name][1] += 1
                star = abs(hasher.hash(r1) - hasher.hash(r2)) / (epsilon - 1)
                if star <= theta:
                    counts[name][0] += 1
    return {name: (hits, total) for name, (hits, total) in counts.items()}


def run_lsh_sensitivity(config: ExperimentConfig) -> list[list]:
    """Rows of LSH_BENCH_HEADER values; numeric fields unformatted."""
    rows: list[list] = []
    for vi, value in enumerate(config.values):
        spec, b = _swept_spec(config, value)
        warmup = config.warmup if config.warmup is not None else 2 * config.k
        ratios: dict[str, list[float]] = {kind: [] for kind in config.hashers}
        pair_totals: dict[str, int] = {kind: 0 for kind in config.hashers}
        for rep in range(config.repetitions):
            rep_seed = derive_seed(config.seed, 7 + vi, rep)
            trace = generate(replace(spec, seed=rep_seed))
            lsh_config = LshConfig(
                k=config.k, b=b, epsilon=config.epsilon, omega=spec.record_count
            )
            hashers = {
                kind: build_hasher(
                    kind,
                    lsh_config,
                    seed=derive_seed(rep_seed, HASHER_KINDS.index(kind)),
                )
                for kind in config.hashers
            }
            outcome = replay_accuracy(
                trace,
                hashers,
                k=config.k,
                epsilon=config.epsilon,
                theta=config.theta,
                x=config.x,
                pairs_per_query=config.pairs_per_query,
                warmup=warmup,
                rng=random.Random(derive_seed(rep_seed, 0xACC)),
            )
            for kind, (hits, total) in outcome.items():
                pair_totals[kind] += total
                if total:
                    ratios[kind].append(hits / total)
        for kind in config.hashers:
            probability = statistics.fmean(ratios[kind]) if ratios[kind] else 0.0
            rows.append(
                [
                    config.parameter,
                    value,
                    kind,
                    config.repetitions,
                    pair_totals[kind],
                    probability,
                    config.theta,
                    config.x,
                ]
            )
    return rows


def run_oracle_suite(full: bool = False) -> list[OracleCheck]:
    """The enumeration checks behind the `oracle` subcommand.

    The full tier re-runs the exhaustive settings used by the acceptance
    tests; the default tier is a faster smoke pass over the same checks.
    """
    if full:
        return [
            check_distance_lower_bound(k=10, bs=(1, 2, 5), mappings_per_b=50),
            check_collision_probability_exact(12),
            check_probability_monotonicity(18),
            check_grouping_ratio(10),
            check_hamming_manhattan_equivalence(10),
        ]
    return [
        check_distance_lower_bound(k=8, bs=(1, 2, 4), mappings_per_b=10),
        check_collision_probability_exact(10),
        check_probability_monotonicity(18),
        check_grouping_ratio(8),
        check_hamming_manhattan_equivalence(8),
    ]
