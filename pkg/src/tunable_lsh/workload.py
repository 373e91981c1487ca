"""Seeded synthetic workloads with a controllable drift rate.

A pool of uniqueness_100 cluster templates takes turns serving queries.
Time splits into segments of 100/u queries; segment s is served by pool
slot s mod u, so every 100-query window observes exactly u distinct
templates. Each time a slot's turn comes around its member set drifts:
a jitter-sized fraction of members is swapped for records outside the
set. Each query then instantiates the slot with a transient flicker at
half the jitter rate, so queries within one segment stay highly similar
without repeating exactly, while the clusters themselves wander over
the full trace.

Traces round-trip through a line-oriented text format: an optional
`# trace key=value ...` header, then one `t: p1 p2 ...` line per query
with positions ascending and t counting up from 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, fields
from typing import Iterator

from .core_model import QueryAccess

ACCESS_MODES = ("random", "sequential")


@dataclass(frozen=True)
class WorkloadSpec:
    record_count: int
    records_per_query: int
    num_queries: int = 3000
    record_size: int = 128
    uniqueness_100: int = 100
    access_mode: str = "random"
    jitter: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.record_count < 1:
            raise ValueError("record_count must be positive")
        if not 1 <= self.records_per_query <= self.record_count:
            raise ValueError("need 1 <= records_per_query <= record_count")
        if self.num_queries < 0:
            raise ValueError("num_queries must be non-negative")
        if self.record_size < 1:
            raise ValueError("record_size must be positive")
        if not 1 <= self.uniqueness_100 <= 100:
            raise ValueError("uniqueness_100 must lie in [1, 100]")
        if self.access_mode not in ACCESS_MODES:
            raise ValueError(f"access_mode must be one of {ACCESS_MODES}")
        if not 0.0 <= self.jitter <= 0.5:
            raise ValueError("jitter must lie in [0, 0.5]")

    def meta(self) -> dict[str, str]:
        return {f.name: str(getattr(self, f.name)) for f in fields(self)}


@dataclass(frozen=True)
class Trace:
    queries: tuple[QueryAccess, ...]
    meta: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.queries)

    def __iter__(self) -> Iterator[QueryAccess]:
        return iter(self.queries)

    def __getitem__(self, i: int) -> QueryAccess:
        return self.queries[i]


def generate(spec: WorkloadSpec) -> Trace:
    trace, _ = generate_labeled(spec)
    return trace


def generate_labeled(spec: WorkloadSpec) -> tuple[Trace, list[int]]:
    """Generate a trace plus the pool-slot label of each query.

    Labels identify template lineages: a slot keeps its label while its
    member set drifts. Tests use them to measure the distinct-template
    rate directly.
    """
    rng = random.Random(spec.seed)
    u = spec.uniqueness_100
    n = spec.records_per_query
    count = spec.record_count
    swaps = min(round(n * spec.jitter), count - n)
    flicks = min(round(n * spec.jitter / 2), count - n)
    dense = n * 2 > count

    def fresh_start() -> int:
        return rng.randrange(count - n + 1)

    def draw_outsider(member_set: set[int]) -> int:
        if dense:
            outside = [r for r in range(count) if r not in member_set]
            return rng.choice(outside)
        candidate = rng.randrange(count)
        while candidate in member_set:
            candidate = rng.randrange(count)
        return candidate

    # slot state: member list + set for random mode, range start for
    # sequential; positions tuple cached until the slot drifts again
    slot_members: list[list[int]] = []
    slot_sets: list[set[int]] = []
    slot_starts: list[int] = []
    slot_cache: list[tuple[int, ...]] = []

    def init_slot() -> None:
        if spec.access_mode == "sequential":
            start = fresh_start()
            slot_starts.append(start)
            slot_members.append([])
            slot_sets.append(set())
            slot_cache.append(tuple(range(start, start + n)))
        else:
            members = rng.sample(range(count), n)
            slot_members.append(members)
            slot_sets.append(set(members))
            slot_starts.append(0)
            slot_cache.append(tuple(sorted(members)))

    def drift_slot(slot: int) -> None:
        if swaps == 0:
            return
        if spec.access_mode == "sequential":
            shift = rng.randint(-swaps, swaps)
            start = min(max(slot_starts[slot] + shift, 0), count - n)
            slot_starts[slot] = start
            slot_cache[slot] = tuple(range(start, start + n))
            return
        members = slot_members[slot]
        member_set = slot_sets[slot]
        for i in rng.sample(range(n), swaps):
            candidate = draw_outsider(member_set)
            member_set.discard(members[i])
            member_set.add(candidate)
            members[i] = candidate
        slot_cache[slot] = tuple(sorted(members))

    def instantiate(slot: int) -> tuple[int, ...]:
        """Slot members with a transient flicker; slot state untouched."""
        if flicks == 0:
            return slot_cache[slot]
        if spec.access_mode == "sequential":
            shift = rng.randint(-flicks, flicks)
            start = min(max(slot_starts[slot] + shift, 0), count - n)
            return tuple(range(start, start + n))
        members = list(slot_members[slot])
        taken = set(slot_sets[slot])
        for i in rng.sample(range(n), flicks):
            candidate = draw_outsider(taken)
            taken.add(candidate)
            members[i] = candidate
        return tuple(sorted(members))

    queries: list[QueryAccess] = []
    labels: list[int] = []
    prev_segment = -1
    for t in range(spec.num_queries):
        segment = t * u // 100
        slot = segment % u
        if segment != prev_segment:
            if len(slot_members) <= slot:
                init_slot()
            elif segment >= u:
                drift_slot(slot)
            prev_segment = segment
        queries.append(QueryAccess(t, instantiate(slot)))
        labels.append(slot)

    return Trace(tuple(queries), spec.meta()), labels


class TraceParseError(ValueError):
    pass


def write_trace(trace: Trace, path) -> None:
    with open(path, "w", newline="") as fh:
        if trace.meta:
            header = " ".join(f"{k}={v}" for k, v in sorted(trace.meta.items()))
            fh.write(f"# trace {header}\n")
        for q in trace.queries:
            fh.write(f"{q.t}: " + " ".join(str(p) for p in q.positions) + "\n")


def read_trace(path) -> Trace:
    queries: list[QueryAccess] = []
    meta: dict[str, str] = {}
    expected = 0
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if lineno == 1 and line.startswith("# trace"):
                for token in line[len("# trace") :].split():
                    key, sep, value = token.partition("=")
                    if not sep or not key:
                        raise TraceParseError(
                            f"{path}:{lineno}: bad header token {token!r}"
                        )
                    meta[key] = value
                continue
            head, sep, rest = line.partition(":")
            if not sep:
                raise TraceParseError(
                    f"{path}:{lineno}: expected 't: positions', got {line!r}"
                )
            try:
                t = int(head)
            except ValueError:
                raise TraceParseError(
                    f"{path}:{lineno}: bad sequence number {head!r}"
                ) from None
            if t != expected:
                raise TraceParseError(
                    f"{path}:{lineno}: expected query {expected}, found {t}"
                )
            try:
                positions = tuple(int(tok) for tok in rest.split())
            except ValueError:
                raise TraceParseError(
                    f"{path}:{lineno}: bad position in {rest.strip()!r}"
                ) from None
            try:
                queries.append(QueryAccess(t, positions))
            except ValueError as exc:
                raise TraceParseError(f"{path}:{lineno}: {exc}") from None
            expected += 1
    return Trace(tuple(queries), meta)
