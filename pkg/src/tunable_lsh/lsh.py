"""Workload-adaptive hashing of records to page ids.

A record's recent co-access history is folded into 2b small counters; a
space-filling curve projects the counter point into [0, epsilon). Records
accessed by similar queries get nearby counter points, hence nearby pages.

Counters live in a ring of 2b entries sharing a global phase. Every
ceil(k/b) queries the phase advances, the entry entering the allowed
region is cleared, and increments for group g land on whichever of
{g, g+b} the region currently contains. An access therefore stays visible
for at least k and at most 2k - 1 subsequent queries (b dividing k), with
no per-query scan over the window.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Callable, Sequence

from .core_model import QueryAccess
from .curves import CURVES, morton_encode
from .mds_tuner import QueryTuner, RoundRobinTuner
from .minhash import mix64


@dataclass(frozen=True)
class LshConfig:
    """Sizing knobs: window k, group count b, pages epsilon, records omega."""

    k: int
    b: int
    epsilon: int
    omega: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be positive")
        if not 1 <= self.b <= self.k:
            raise ValueError("need 1 <= b <= k")
        if self.epsilon < 1:
            raise ValueError("epsilon must be positive")
        if self.omega < 1:
            raise ValueError("omega must be positive")
        if self.group_span > 0xFFFF:
            raise ValueError("counter entries are 16-bit; ceil(k/b) too large")

    @property
    def group_span(self) -> int:
        """Queries between phase ticks; also the cap on any single counter."""
        return -(-self.k // self.b)

    @property
    def bits_per_dim(self) -> int:
        return self.group_span.bit_length()


class CounterBank:
    """omega rows of 2b saturating counters with phased forgetting.

    Rows allocate on first touch. Resets owed by a cold row replay when it
    is next touched or read; a gap of 2b phases or more just zeroes the
    row. Replay is idempotent, so reads between two tunes always observe
    the same logical counters.
    """

    def __init__(self, config: LshConfig):
        self.config = config
        self.shift = 0
        self._rows: dict[int, array] = {}
        self._stamps: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def tick(self, t: int) -> None:
        """Advance the phase for query t; exactly one call per query."""
        if t > 0 and t % self.config.group_span == 0:
            self.shift += 1

    def _refresh(self, record_id: int) -> array:
        row = self._rows[record_id]
        last = self._stamps[record_id]
        if last != self.shift:
            width = 2 * self.config.b
            if self.shift - last >= width:
                for i in range(width):
                    row[i] = 0
            else:
                for s in range(last + 1, self.shift + 1):
                    row[(s + self.config.b - 1) % width] = 0
            self._stamps[record_id] = self.shift
        return row

    def _check_id(self, record_id: int) -> None:
        if not 0 <= record_id < self.config.omega:
            raise ValueError(
                f"record {record_id} outside capacity [0, {self.config.omega})"
            )

    def increment(self, record_id: int, group: int) -> None:
        """Count one access of record_id under group, in the allowed region."""
        self._check_id(record_id)
        if not 0 <= group < self.config.b:
            raise ValueError(f"group {group} outside [0, {self.config.b})")
        b = self.config.b
        if record_id in self._rows:
            row = self._refresh(record_id)
        else:
            row = array("H", bytes(4 * b))
            self._rows[record_id] = row
            self._stamps[record_id] = self.shift
        entry = group if (group - self.shift) % (2 * b) < b else group + b
        if row[entry] < self.config.group_span:
            row[entry] += 1

    def row(self, record_id: int) -> tuple[int, ...]:
        """Logical counters for a record; zeros if never touched."""
        self._check_id(record_id)
        if record_id not in self._rows:
            return (0,) * (2 * self.config.b)
        return tuple(self._refresh(record_id))


def z_value(
    counts: Sequence[int],
    epsilon: int,
    *,
    max_count: int,
    curve: str | Callable[[Sequence[int], int], int] = "morton",
) -> int:
    """Project a counter point onto a space-filling curve, scaled to [0, epsilon)."""
    if epsilon < 1:
        raise ValueError("epsilon must be positive")
    if max_count < 1:
        raise ValueError("max_count must be positive")
    for c in counts:
        if c < 0:
            raise ValueError("counts must be non-negative")
        if c > max_count:
            raise OverflowError(f"counter {c} exceeds cap {max_count}")
    encode = CURVES[curve] if isinstance(curve, str) else curve
    bits = max_count.bit_length()
    code = encode(counts, bits)
    return (code * epsilon) >> (len(counts) * bits)


class TunableLsh:
    """The adaptive hasher: counter transform composed with curve projection."""

    def __init__(
        self,
        config: LshConfig,
        *,
        curve: str = "morton",
        seed: int = 0,
        tuner=None,
        **tuner_knobs,
    ):
        if curve not in CURVES:
            raise ValueError(f"unknown curve {curve!r}; have {sorted(CURVES)}")
        self.config = config
        self._curve = CURVES[curve]
        self.bank = CounterBank(config)
        self.tuner = (
            tuner
            if tuner is not None
            else QueryTuner(config.k, config.b, seed=seed, **tuner_knobs)
        )
        self._last_t = -1
        self._pages: dict[tuple[int, ...], int] = {}

    @property
    def epsilon(self) -> int:
        return self.config.epsilon

    def tune(self, q: QueryAccess) -> None:
        """Fold one finished query into the tuner and the counters."""
        if q.t <= self._last_t:
            raise ValueError(f"query {q.t} arrived after {self._last_t}")
        if q.positions and q.positions[-1] >= self.config.omega:
            raise ValueError(
                f"position {q.positions[-1]} outside capacity "
                f"[0, {self.config.omega})"
            )
        self.tuner.reconfigure(q)
        self.bank.tick(q.t)
        group = self.tuner.group_of(q.t)
        for pos in q.positions:
            self.bank.increment(pos, group)
        self._last_t = q.t

    def counters(self, record_id: int) -> tuple[int, ...]:
        return self.bank.row(record_id)

    def hash(self, record_id: int) -> int:
        row = self.bank.row(record_id)
        page = self._pages.get(row)
        if page is None:
            page = z_value(
                row,
                self.config.epsilon,
                max_count=self.config.group_span,
                curve=self._curve,
            )
            if len(self._pages) >= 1 << 20:  # distinct rows rarely get near this
                self._pages.clear()
            self._pages[row] = page
        return page


def static_hash(record_id: int, epsilon: int, seed: int = 0) -> int:
    """Workload-oblivious page assignment: seeded uniform hash mod epsilon."""
    if epsilon < 1:
        raise ValueError("epsilon must be positive")
    return mix64(record_id, seed) % epsilon


def bit_sampling_hash(
    vector: Sequence[int], sampled_positions, epsilon: int
) -> int:
    """Concatenate the sampled bits of a 0/1 vector, scaled to [0, epsilon)."""
    if epsilon < 1:
        raise ValueError("epsilon must be positive")
    positions = sorted(sampled_positions)
    value = 0
    for pos in positions:
        if not 0 <= pos < len(vector):
            raise ValueError(f"sampled position {pos} outside vector")
        value = (value << 1) | (1 if vector[pos] else 0)
    return (value * epsilon) >> len(positions)


class StaticHasher:
    """Baseline with the store-facing interface: tune is a no-op."""

    def __init__(self, epsilon: int, seed: int = 0):
        if epsilon < 1:
            raise ValueError("epsilon must be positive")
        self.epsilon = epsilon
        self._seed = seed

    def tune(self, q: QueryAccess) -> None:
        pass

    def hash(self, record_id: int) -> int:
        return mix64(record_id, self._seed) % self.epsilon


class BitSamplingHasher:
    """Locality-sensitive baseline: fixed sampled ages over the last k queries.

    The sampled vector positions are drawn once; the hash of a record is
    the concatenation of "was this record accessed age-a queries ago" bits.
    Adapts to recency but not to which queries resemble each other.
    """

    def __init__(self, k: int, epsilon: int, *, num_bits: int, seed: int = 0):
        if k < 1:
            raise ValueError("k must be positive")
        if not 1 <= num_bits <= k:
            raise ValueError("need 1 <= num_bits <= k")
        if epsilon < 1:
            raise ValueError("epsilon must be positive")
        import random as _random

        self.k = k
        self.epsilon = epsilon
        self.ages = tuple(sorted(_random.Random(seed).sample(range(k), num_bits)))
        self._window: list[frozenset[int]] = []  # most recent last
        self._last_t = -1

    def tune(self, q: QueryAccess) -> None:
        if q.t <= self._last_t:
            raise ValueError(f"query {q.t} arrived after {self._last_t}")
        self._window.append(frozenset(q.positions))
        if len(self._window) > self.k:
            self._window.pop(0)
        self._last_t = q.t

    def hash(self, record_id: int) -> int:
        n = len(self._window)
        value = 0
        for age in self.ages:
            hit = age < n and record_id in self._window[n - 1 - age]
            value = (value << 1) | (1 if hit else 0)
        return (value * self.epsilon) >> len(self.ages)


def unoptimized_lsh(config: LshConfig, *, curve: str = "morton") -> TunableLsh:
    """The ablation variant: counters and curve, but a fixed round-robin f."""
    return TunableLsh(
        config, curve=curve, tuner=RoundRobinTuner(config.k, config.b)
    )
