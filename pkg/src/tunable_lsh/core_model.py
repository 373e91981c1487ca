"""Exact domain math shared by everything else.

Distances over bit vectors and counter vectors, the closed-form collision
probabilities of the counter transform, and brute-force enumeration oracles
that the property tests and the `oracle` CLI subcommand compare against.
All probabilities are exact big-integer rationals; floats appear only at
reporting boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

# Full pair enumeration walks 4^k pairs; above this, sampling is mandatory.
FULL_ENUMERATION_MAX_K = 22

Grouping = Sequence[int]


@dataclass(frozen=True)
class QueryAccess:
    """One query's accessed record positions, in set form.

    ``positions`` is strictly increasing; membership means the record was
    touched at least once by query ``t``.
    """

    t: int
    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("query sequence number must be non-negative")
        prev = -1
        for p in self.positions:
            if p <= prev:
                raise ValueError("positions must be strictly increasing")
            if p < 0:
                raise ValueError("positions must be non-negative")
            prev = p

    @classmethod
    def from_iterable(cls, t: int, positions: Iterable[int]) -> "QueryAccess":
        return cls(t, tuple(sorted(set(positions))))


def hamming_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of positions where the two equal-length vectors differ."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(1 for x, y in zip(a, b) if x != y)


def manhattan_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Sum of absolute per-coordinate differences."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(abs(x - y) for x, y in zip(a, b))


def bits_of(value: int, k: int) -> tuple[int, ...]:
    """The k low bits of ``value``, index 0 first."""
    return tuple((value >> i) & 1 for i in range(k))


@lru_cache(maxsize=None)
def _pascal_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _pascal_row(n - 1)
    return tuple(
        (prev[i - 1] if i > 0 else 0) + (prev[i] if i < n else 0)
        for i in range(n + 1)
    )


def binomial(n: int, r: int) -> int:
    """C(n, r) from a cached Pascal-rule table; 0 outside 0 <= r <= n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if r < 0 or r > n:
        return 0
    return _pascal_row(n)[r]


def prob_good_approx(x: int, theta: int) -> Fraction:
    """Probability that one counter group compresses a pair at bit distance
    ``x`` down to a counter difference of at most ``theta``.

    Exact value: sum of C(x, i) for i in [ceil((x-theta)/2), floor((x+theta)/2)],
    divided by 2^x. An empty summation range yields 0 (odd x with theta = 0:
    the counter difference is then always odd, never 0).
    """
    if x <= 0:
        raise ValueError("x must be positive")
    if theta < 0 or theta >= x:
        raise ValueError("theta must satisfy 0 <= theta < x")
    lo = -((theta - x) // 2)  # ceil((x - theta) / 2)
    hi = (x + theta) // 2
    if lo > hi:
        return Fraction(0)
    return Fraction(sum(binomial(x, i) for i in range(lo, hi + 1)), 2**x)


def prob_monotonicity_check(theta: int, x_max: int) -> bool:
    """True iff prob_good_approx strictly decreases along x -> x+2 for all
    theta < x <= x_max.

    Pairs where both sides are identically zero (theta = 0 with odd x) carry
    no mass on either side and are exempt from strictness.
    """
    for x in range(theta + 1, x_max + 1):
        near = prob_good_approx(x, theta)
        far = prob_good_approx(x + 2, theta)
        if near == 0 and far == 0:
            continue
        if not near > far:
            return False
    return True


def grouping_gamma(k: int, l1: int, l2: int) -> Fraction:
    """Probability that a pair with load factors (l1, l2) loses no distance
    in one counter group: C(l_max, l_min) / C(k, l_min)."""
    if k <= 0:
        raise ValueError("k must be positive")
    for load in (l1, l2):
        if not 0 <= load <= k:
            raise ValueError(f"load factor {load} outside [0, {k}]")
    l_max, l_min = max(l1, l2), min(l1, l2)
    return Fraction(binomial(l_max, l_min), binomial(k, l_min))


# ---------------------------------------------------------------------------
# Enumeration oracles.  These recompute everything from raw bit vectors with
# no shared code path into the closed forms above.

_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


def _popcount(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    for s in (0, 16, 32, 48):
        out += _POP16[(a >> np.uint64(s)) & np.uint64(0xFFFF)]
    return out


def _as_grouping(k: int, b: int, f: Grouping | Callable[[int], int]) -> tuple[int, ...]:
    grouping = tuple(f(t) for t in range(k)) if callable(f) else tuple(f)
    if len(grouping) != k:
        raise ValueError(f"grouping must cover all {k} positions")
    if any(not 0 <= g < b for g in grouping):
        raise ValueError(f"group ids must lie in [0, {b})")
    return grouping


def _group_masks(k: int, b: int, grouping: Sequence[int]) -> list[int]:
    masks = [0] * b
    for t in range(k):
        masks[grouping[t]] |= 1 << t
    return masks


def counters_from_bits(bits: Sequence[int], grouping: Grouping, b: int) -> tuple[int, ...]:
    """Fold a k-bit utilization vector into b per-group counts."""
    grouping = _as_grouping(len(bits), b, grouping)
    counts = [0] * b
    for t, bit in enumerate(bits):
        if bit:
            counts[grouping[t]] += 1
    return tuple(counts)


def random_balanced_grouping(k: int, b: int, rng) -> tuple[int, ...]:
    """A uniformly shuffled grouping where every group gets floor(k/b) or
    ceil(k/b) positions, with the oversized groups chosen at random."""
    if not 1 <= b <= k:
        raise ValueError("need 1 <= b <= k")
    q, r = divmod(k, b)
    extras = set(rng.sample(range(b), r))
    slots = [g for g in range(b) for _ in range(q + (1 if g in extras else 0))]
    rng.shuffle(slots)
    return tuple(slots)


def brute_force_h1_distribution(
    k: int,
    b: int,
    f: Grouping | Callable[[int], int],
    *,
    sample_pairs: int | None = None,
    seed: int = 0,
) -> dict[tuple[int, int], int]:
    """Joint counts of (bit distance, counter distance) over vector pairs.

    Enumerates all 4^k ordered pairs when ``sample_pairs`` is None (k must be
    <= FULL_ENUMERATION_MAX_K; practical runtimes stop around k = 12), else
    draws that many seeded uniform pairs. Counts are exact integers keyed by
    (hamming(r1, r2), manhattan(h1(r1), h1(r2))).
    """
    grouping = _as_grouping(k, b, f)
    masks = _group_masks(k, b, grouping)
    if sample_pairs is None:
        if k > FULL_ENUMERATION_MAX_K:
            raise ValueError(
                f"full enumeration capped at k = {FULL_ENUMERATION_MAX_K}; "
                "pass sample_pairs to sample"
            )
        values = np.arange(1 << k, dtype=np.uint64)
        v1 = v2 = values
    else:
        if sample_pairs <= 0:
            raise ValueError("sample_pairs must be positive")
        rng = np.random.default_rng(seed)
        v1 = rng.integers(0, 1 << k, size=sample_pairs, dtype=np.uint64)
        v2 = rng.integers(0, 1 << k, size=sample_pairs, dtype=np.uint64)

    gc1 = np.stack([_popcount(v1 & np.uint64(m)) for m in masks], axis=1)
    gc2 = gc1 if sample_pairs is None else np.stack(
        [_popcount(v2 & np.uint64(m)) for m in masks], axis=1
    )

    side = k + 1
    joint = np.zeros(side * side, dtype=np.int64)
    if sample_pairs is None:
        block = max(1, (1 << 22) // max(1, len(v2)))
        for start in range(0, len(v1), block):
            rows = v1[start : start + block]
            delta = _popcount(rows[:, None] ^ v2[None, :])
            dm = np.abs(
                gc1[start : start + block, None, :].astype(np.int64)
                - gc2[None, :, :].astype(np.int64)
            ).sum(axis=2)
            joint += np.bincount(
                (delta * side + dm).ravel(), minlength=side * side
            )
    else:
        delta = _popcount(v1 ^ v2)
        dm = np.abs(gc1.astype(np.int64) - gc2.astype(np.int64)).sum(axis=1)
        joint += np.bincount(delta * side + dm, minlength=side * side)

    out: dict[tuple[int, int], int] = {}
    for idx in np.flatnonzero(joint):
        out[(int(idx) // side, int(idx) % side)] = int(joint[idx])
    return out


# ---------------------------------------------------------------------------
# Oracle suite checks.  Each recomputes a guarantee by enumeration and
# reports case/failure counts for the CLI `oracle` subcommand.


@dataclass(frozen=True)
class OracleCheck:
    name: str
    cases: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


def check_distance_lower_bound(
    k: int = 10,
    bs: Sequence[int] = (1, 2, 5),
    mappings_per_b: int = 50,
    seed: int = 20260821,
) -> OracleCheck:
    """Counter distance never exceeds bit distance, over all 4^k pairs and
    random balanced groupings."""
    import random as _random

    rng = _random.Random(seed)
    cases = failures = 0
    worst = ""
    for b in bs:
        for _ in range(mappings_per_b):
            grouping = random_balanced_grouping(k, b, rng)
            joint = brute_force_h1_distribution(k, b, grouping)
            for (delta, dm), count in joint.items():
                cases += count
                if dm > delta:
                    failures += count
                    worst = f"b={b} grouping={grouping} delta={delta} dm={dm}"
    return OracleCheck("counter-distance-lower-bound", cases, failures, worst)


def check_collision_probability_exact(x_max: int = 12) -> OracleCheck:
    """Single-group enumeration frequencies equal the closed form, as exact
    rationals, for every theta < x <= x_max."""
    joint = brute_force_h1_distribution(x_max, 1, [0] * x_max)
    by_delta: dict[int, dict[int, int]] = {}
    for (delta, dm), count in joint.items():
        by_delta.setdefault(delta, {})[dm] = count
    cases = failures = 0
    worst = ""
    for x in range(1, x_max + 1):
        row = by_delta[x]
        total = sum(row.values())
        for theta in range(0, x):
            cases += 1
            hits = sum(c for dm, c in row.items() if dm <= theta)
            if Fraction(hits, total) != prob_good_approx(x, theta):
                failures += 1
                worst = f"x={x} theta={theta}"
    return OracleCheck("collision-probability-closed-form", cases, failures, worst)


def check_probability_monotonicity(x_max: int = 18) -> OracleCheck:
    """Collision probability strictly falls as pair distance grows by 2."""
    cases = failures = 0
    worst = ""
    for theta in range(0, x_max):
        for x in range(theta + 1, x_max + 1):
            cases += 1
            near = prob_good_approx(x, theta)
            far = prob_good_approx(x + 2, theta)
            if near == 0 and far == 0:
                continue
            if not near > far:
                failures += 1
                worst = f"x={x} theta={theta}"
    return OracleCheck("collision-probability-monotone", cases, failures, worst)


def check_grouping_ratio(k_max: int = 10) -> OracleCheck:
    """Exact-match probability per load-factor pair equals grouping_gamma,
    enumerated over all pairs for every k <= k_max."""
    cases = failures = 0
    worst = ""
    for k in range(1, k_max + 1):
        values = np.arange(1 << k, dtype=np.uint64)
        pc = _popcount(values)
        match = np.zeros((k + 1, k + 1), dtype=np.int64)
        total = np.zeros((k + 1, k + 1), dtype=np.int64)
        block = max(1, (1 << 22) // len(values))
        for start in range(0, len(values), block):
            rows = values[start : start + block]
            delta = _popcount(rows[:, None] ^ values[None, :])
            lo = pc[start : start + block, None]
            hi = pc[None, :]
            exact = delta == np.abs(lo - hi)
            idx = (lo * (k + 1) + hi).ravel()
            total += np.bincount(idx, minlength=(k + 1) ** 2).reshape(k + 1, k + 1)
            match += np.bincount(
                idx, weights=exact.ravel(), minlength=(k + 1) ** 2
            ).astype(np.int64).reshape(k + 1, k + 1)
        for l1 in range(k + 1):
            for l2 in range(k + 1):
                cases += 1
                got = Fraction(int(match[l1, l2]), int(total[l1, l2]))
                if got != grouping_gamma(k, l1, l2):
                    failures += 1
                    worst = f"k={k} l1={l1} l2={l2}"
    return OracleCheck("grouping-exactness-ratio", cases, failures, worst)


def check_hamming_manhattan_equivalence(k: int = 10) -> OracleCheck:
    """On 0/1 vectors the two distances coincide; checked over all pairs by
    computing each through a separate route."""
    n = 1 << k
    values = np.arange(n, dtype=np.uint64)
    bits = ((values[:, None] >> np.arange(k, dtype=np.uint64)[None, :]) & 1).astype(
        np.int16
    )
    cases = failures = 0
    worst = ""
    block = max(1, (1 << 21) // n)
    for start in range(0, n, block):
        ham = _popcount(values[start : start + block, None] ^ values[None, :])
        manh = np.abs(bits[start : start + block, None, :] - bits[None, :, :]).sum(
            axis=2
        )
        cases += ham.size
        bad = ham != manh
        if bad.any():
            failures += int(bad.sum())
            i, j = np.argwhere(bad)[0]
            worst = f"pair ({int(values[start + i])}, {int(values[j])})"
    return OracleCheck("hamming-manhattan-equivalence", cases, failures, worst)
