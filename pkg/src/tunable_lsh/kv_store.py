"""Self-clustering in-memory paged key-value store.

Records live in fixed-capacity pages; a pluggable hasher proposes a target
page per record and linear probing over pages resolves overflow. Queries
are bracketed by begin_query/end_query; the accessed set feeds the hasher's
tune step and a budgeted relocation pass that drags accessed records toward
their current targets. With an adaptive hasher the store clusters itself
around the workload; with a static one it is a plain paged hashtable.

Timing contract: fetch_ns spans begin_query to end_query (the caller is
expected to issue its gets back to back); tune_ns covers the hasher's
retune alone; move_ns covers the relocation pass. Passing clock=None
disables timing and leaves all three fields None.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core_model import QueryAccess


class StoreError(Exception):
    pass


class StoreFullError(StoreError):
    pass


class QueryStateError(StoreError):
    pass


@dataclass(frozen=True)
class QueryMetrics:
    index: int
    accessed: int
    pages_touched: int
    moves: int
    fetch_ns: int | None
    tune_ns: int | None
    move_ns: int | None


class PagedStore:
    def __init__(
        self,
        hasher,
        *,
        page_size: int = 4096,
        record_size: int = 128,
        relocation_budget: int | None = None,
        clock=time.perf_counter_ns,
    ):
        if page_size < 1 or record_size < 1:
            raise ValueError("page_size and record_size must be positive")
        capacity = page_size // record_size
        if capacity < 1:
            raise ValueError("record does not fit in a page")
        self.hasher = hasher
        self.epsilon = hasher.epsilon
        self.page_size = page_size
        self.record_size = record_size
        self.capacity = capacity
        self._pages: list[list[tuple[int, bytes]]] = [
            [] for _ in range(self.epsilon)
        ]
        self._directory: dict[int, tuple[int, int]] = {}
        self._position: dict[int, int] = {}
        self._key_of: list[int] = []
        self._free = (1 << self.epsilon) - 1  # bit p set: page p has room
        self._clock = clock
        self._budget = relocation_budget
        self._open = False
        self._accessed: set[int] = set()
        self._qpages: set[int] = set()
        self._last_access: tuple[int, ...] = ()
        self._begin_ns: int | None = None
        self._tuned = 0
        self._metrics: list[QueryMetrics] = []

    def __len__(self) -> int:
        return len(self._directory)

    def __contains__(self, key: int) -> bool:
        return key in self._directory

    # -- placement ----------------------------------------------------------

    def _probe(self, target: int) -> int:
        """First page with a free slot at or after target, wrapping."""
        if self._free == 0:
            raise StoreFullError("all pages full")
        mask = self._free >> target
        if mask:
            return target + ((mask & -mask).bit_length() - 1)
        low = self._free & ((1 << target) - 1)
        return (low & -low).bit_length() - 1

    def _nearest_free(self, target: int) -> int | None:
        """Free page minimizing |page - target|; ties break forward."""
        if self._free == 0:
            return None
        ahead = self._free >> target
        fwd = target + ((ahead & -ahead).bit_length() - 1) if ahead else None
        behind = self._free & ((1 << target) - 1)
        bwd = behind.bit_length() - 1 if behind else None
        if fwd is None:
            return bwd
        if bwd is None or fwd - target <= target - bwd:
            return fwd
        return bwd

    def _append(self, page: int, entry: tuple[int, bytes]) -> None:
        slots = self._pages[page]
        slots.append(entry)
        self._directory[entry[0]] = (page, len(slots) - 1)
        if len(slots) == self.capacity:
            self._free &= ~(1 << page)

    def put(self, key: int, payload: bytes, *, page: int | None = None) -> None:
        """Store a record, probing from the hasher's page for its position.

        A bulk loader may pass an explicit starting page to stripe records
        across the table; without per-page slack no later relocation can
        land nearer its target than where the record already sits.
        """
        if key in self._directory:
            raise ValueError(f"key {key} already stored")
        if len(payload) != self.record_size:
            raise ValueError(
                f"payload is {len(payload)} bytes, expected {self.record_size}"
            )
        if page is not None and not 0 <= page < self.epsilon:
            raise ValueError(f"page {page} out of range")
        pos = len(self._key_of)
        start = self.hasher.hash(pos) if page is None else page
        landing = self._probe(start)
        self._position[key] = pos
        self._key_of.append(key)
        self._append(landing, (key, bytes(payload)))

    def get(self, key: int) -> bytes:
        loc = self._directory.get(key)
        if loc is None:
            raise KeyError(key)
        page, slot = loc
        if self._open:
            self._accessed.add(self._position[key])
            self._qpages.add(page)
        return self._pages[page][slot][1]

    # -- query bracketing ---------------------------------------------------

    def begin_query(self) -> int:
        if self._open:
            raise QueryStateError("a query is already open")
        self._open = True
        self._accessed = set()
        self._qpages = set()
        self._begin_ns = self._clock() if self._clock else None
        return len(self._metrics)

    def end_query(self) -> int:
        if not self._open:
            raise QueryStateError("no open query")
        now = self._clock() if self._clock else None
        fetch_ns = None if self._begin_ns is None else now - self._begin_ns
        self._open = False
        self._last_access = tuple(sorted(self._accessed))
        moves = 0
        tune_ns = None
        move_ns = None
        if self._last_access:
            t0 = self._clock() if self._clock else None
            q = QueryAccess(self._tuned, self._last_access)
            self.hasher.tune(q)
            self._tuned += 1
            t1 = self._clock() if self._clock else None
            budget = self._budget if self._budget is not None else len(q.positions)
            moves = self.relocate(budget)
            if t0 is not None:
                tune_ns = t1 - t0
                move_ns = self._clock() - t1
        self._metrics.append(
            QueryMetrics(
                len(self._metrics),
                len(self._accessed),
                len(self._qpages),
                moves,
                fetch_ns,
                tune_ns,
                move_ns,
            )
        )
        return len(self._metrics) - 1

    # -- relocation -----------------------------------------------------------

    def relocate(self, budget: int) -> int:
        """Move up to budget records from the last query toward their targets."""
        if self._open:
            raise QueryStateError("cannot relocate during an open query")
        if budget <= 0:
            return 0
        by_target: dict[int, list[int]] = {}
        for pos in self._last_access:
            key = self._key_of[pos]
            target = self.hasher.hash(pos)
            if self._directory[key][0] != target:
                by_target.setdefault(target, []).append(key)
        moved = 0
        for target in sorted(by_target):
            for key in by_target[target]:
                if moved >= budget:
                    return moved
                if self._move(key, target):
                    moved += 1
        return moved

    def _move(self, key: int, target: int) -> bool:
        page, slot = self._directory[key]
        landing = self._nearest_free(target)
        # only move toward the target; a landing no closer than the current
        # page would just churn records through the free space forever
        if landing is None or landing == page or (
            abs(landing - target) >= abs(page - target)
        ):
            return False
        entry = self._pages[page][slot]
        tail = self._pages[page].pop()
        if slot < len(self._pages[page]):
            self._pages[page][slot] = tail
            self._directory[tail[0]] = (page, slot)
        self._free |= 1 << page
        self._append(landing, entry)
        return True

    # -- introspection --------------------------------------------------------

    def metrics(self) -> list[QueryMetrics]:
        return list(self._metrics)

    def location_of(self, key: int) -> tuple[int, int]:
        loc = self._directory.get(key)
        if loc is None:
            raise KeyError(key)
        return loc

    def position_of(self, key: int) -> int:
        pos = self._position.get(key)
        if pos is None:
            raise KeyError(key)
        return pos

    def page_occupancy(self) -> list[int]:
        return [len(p) for p in self._pages]

    def items(self):
        for page in self._pages:
            yield from page

    def audit(self) -> None:
        """Raise if the directory, pages, or free mask disagree."""
        seen = 0
        for page_id, slots in enumerate(self._pages):
            if len(slots) > self.capacity:
                raise AssertionError(f"page {page_id} over capacity")
            free_bit = (self._free >> page_id) & 1
            if free_bit != (1 if len(slots) < self.capacity else 0):
                raise AssertionError(f"free mask wrong for page {page_id}")
            for slot, (key, payload) in enumerate(slots):
                if self._directory.get(key) != (page_id, slot):
                    raise AssertionError(f"directory mismatch for key {key}")
                if len(payload) != self.record_size:
                    raise AssertionError(f"payload size drifted for key {key}")
                seen += 1
        if seen != len(self._directory):
            raise AssertionError("orphan directory entries")
