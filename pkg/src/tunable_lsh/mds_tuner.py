"""Self-tuning query-to-group mapping.

Each tracked query lives in a ring of k slots and gets a coordinate on a
line. A spring-force pass per incoming query pulls queries with colliding
Min-Hash signatures together and pushes differing ones apart; the group of
a query is then read off a rank partition of the line into b chunks. Group
values are derived from the chunk's centroid identifier, so a group whose
membership is stable keeps its value while the window slides.

Slot indices recycle: references held in sample or neighbor sets follow the
slot, not the departed query. Distances are recomputed from current
signatures on every use, so a recycled reference simply starts acting as
the new occupant.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

from .core_model import QueryAccess
from .minhash import minhash, minhash_distance, mix64


@dataclass(frozen=True)
class GroupAssignment:
    """One rank-partition chunk with its resolved hash value."""

    group_id: int
    centroid_id: int
    members: tuple[int, ...]


class QueryTuner:
    """Incremental 1-D force-directed embedding over the last k queries."""

    def __init__(
        self,
        k: int,
        b: int,
        *,
        sample_capacity: int = 6,
        neighbor_capacity: int = 6,
        decay: float = 0.5,
        far_target: float = 1.0,
        seed: int = 0,
    ):
        if k < 1:
            raise ValueError("k must be positive")
        if not 1 <= b <= k:
            raise ValueError("need 1 <= b <= k")
        if sample_capacity < 1 or neighbor_capacity < 1:
            raise ValueError("capacities must be positive")
        if not 0.0 < decay < 1.0:
            raise ValueError("decay must lie in (0, 1)")
        if far_target <= 0.0:
            raise ValueError("far_target must be positive")
        self.k = k
        self.b = b
        self.x = [0.0] * k
        self.v = [0.0] * k
        self.sig = [0] * k
        self.samples: list[deque[int]] = [
            deque(maxlen=sample_capacity) for _ in range(k)
        ]
        self.neighbors: list[list[int]] = [[] for _ in range(k)]
        self.begin = 0
        self.size = 0
        self._sample_cap = sample_capacity
        self._neighbor_cap = neighbor_capacity
        self._decay = decay
        self._far = far_target
        self._rng = random.Random(seed)
        self._sig_seed = seed
        self._id_seed = seed ^ 0x7F4A7C15
        self._queries = 0
        self._values: dict[int, int] | None = None
        self._assignments: list[GroupAssignment] = []

    # -- ring bookkeeping ---------------------------------------------------

    def live_slots(self) -> list[int]:
        return [(self.begin + j) % self.k for j in range(self.size)]

    def _is_live(self, slot: int) -> bool:
        return (slot - self.begin) % self.k < self.size

    def _random_other(self, x: int) -> int:
        # uniform over live slots excluding x; caller guarantees size >= 2
        j = self._rng.randrange(self.size - 1)
        if j >= (x - self.begin) % self.k:
            j += 1
        return (self.begin + j) % self.k

    def _dist(self, x: int, y: int) -> int:
        return minhash_distance(self.sig[x], self.sig[y])

    # -- per-query retuning -------------------------------------------------

    def reconfigure(self, q: QueryAccess) -> None:
        """Absorb the next query and run one force sweep over live slots."""
        if q.t != self._queries:
            raise ValueError(f"expected query {self._queries}, got {q.t}")
        if not q.positions:
            raise ValueError("cannot tune on a query that accessed nothing")
        pos = (self.begin + self.size) % self.k
        self.sig[pos] = minhash(q.positions, seed=self._sig_seed)
        self.x[pos] = self._rng.uniform(-0.5, 0.5)
        self.v[pos] = 0.0
        self.samples[pos].clear()
        self.neighbors[pos].clear()
        if self.size == self.k:
            self.begin = (self.begin + 1) % self.k
        else:
            self.size += 1
        self._queries += 1
        for slot in self.live_slots():
            self.update_sample_and_neighbors(slot)
            self.update_velocity(slot)
        for slot in self.live_slots():
            self.update_coordinates(slot)
        self._values = None

    def _farthest_neighbor(self, x: int) -> int:
        near = self.neighbors[x]
        for i, y in enumerate(near):
            if self._dist(x, y) == 1:
                return i
        return 0

    def update_sample_and_neighbors(self, x: int) -> None:
        """Refill x's random sample; keep its closest-seen slots as neighbors."""
        sample = self.samples[x]
        sample.clear()
        if self.size < 2:
            return
        near = self.neighbors[x]
        for _ in range(self._sample_cap + self._neighbor_cap):
            y = self._random_other(x)
            if len(near) < self._neighbor_cap:
                if y not in near:
                    near.append(y)
                else:
                    sample.append(y)
                continue
            far = self._farthest_neighbor(x)
            if y not in near and self._dist(x, y) < self._dist(x, near[far]):
                sample.append(near[far])
                near[far] = y
            else:
                sample.append(y)

    def update_velocity(self, x: int) -> None:
        """Decay old velocity and add the mean spring force from S and N."""
        members = set(self.samples[x]) | set(self.neighbors[x])
        members.discard(x)
        self.v[x] *= self._decay
        if not members:
            return
        force = 0.0
        for y in members:
            target = 0.0 if self._dist(x, y) == 0 else self._far
            gap = abs(self.x[x] - self.x[y])
            if self.x[x] < self.x[y]:
                force += gap - target
            else:
                force += target - gap
        self.v[x] += force / len(members)

    def update_coordinates(self, x: int) -> None:
        self.x[x] += self.v[x]

    # -- group readout --------------------------------------------------------

    def _build_partition(self) -> None:
        ranked = sorted(self.live_slots(), key=lambda s: (self.x[s], s))
        chunk = math.ceil(self.size / self.b) if self.size else 1
        values: dict[int, int] = {}
        assignments: list[GroupAssignment] = []
        taken: set[int] = set()
        for i in range(0, self.size, chunk):
            members = tuple(ranked[i : i + chunk])
            centroid = min(members, key=lambda s: mix64(s, self._id_seed))
            value = mix64(centroid, self._id_seed) % self.b
            while value in taken:
                value = (value + 1) % self.b
            taken.add(value)
            assignments.append(GroupAssignment(value, centroid, members))
            for s in members:
                values[s] = value
        self._values = values
        self._assignments = assignments

    def partition(self) -> list[GroupAssignment]:
        """Current rank partition, cached until the next reconfigure."""
        if self._values is None:
            self._build_partition()
        return list(self._assignments)

    def group_of(self, t: int) -> int:
        """Group value of tracked query t; stable between reconfigures."""
        slot = t % self.k
        if self.size == 0 or not self._is_live(slot):
            raise ValueError(f"query {t} is not tracked")
        if self._values is None:
            self._build_partition()
        return self._values[slot]


class RoundRobinTuner:
    """Fixed rotation of groups; the no-adaptation ablation of QueryTuner.

    Groups take turns receiving queries, each serving ceil(k/b) consecutive
    sequence numbers before the next takes over. Any k-query window lands
    exactly ceil(k/b) queries in each group, so the balance bound holds
    without ever looking at query contents.
    """

    def __init__(self, k: int, b: int, **_unused):
        if not 1 <= b <= k:
            raise ValueError("need 1 <= b <= k")
        self.k = k
        self.b = b
        self._span = -(-k // b)
        self._queries = 0

    def reconfigure(self, q: QueryAccess) -> None:
        if q.t != self._queries:
            raise ValueError(f"expected query {self._queries}, got {q.t}")
        self._queries += 1

    def group_of(self, t: int) -> int:
        return (t // self._span) % self.b
