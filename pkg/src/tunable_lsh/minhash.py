"""Min-Hash signatures over sets of positional identifiers.

A single seeded 64-bit mixer stands in for the usual family of hash
functions: one signature per set, and signature equality as a {0,1}
distance. Individually that is a coarse Jaccard estimate; consumers
average it over many pairs, where the errors wash out.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(value: int, seed: int = 0) -> int:
    """Seeded 64-bit finalizer with full avalanche; stable across platforms."""
    z = (value + (seed + 1) * _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def minhash(
    positions: Iterable[int],
    seed: int = 0,
    hash_fn: Callable[[int], int] | None = None,
) -> int:
    """Minimum of the seeded hash over the set's elements.

    Order-insensitive by construction. ``hash_fn`` overrides the internal
    mixer (tests use identity-like functions); it must be injective enough
    for the caller's purposes.
    """
    fn = hash_fn if hash_fn is not None else (lambda p: mix64(p, seed))
    best: int | None = None
    for p in positions:
        h = fn(p)
        if best is None or h < best:
            best = h
    if best is None:
        raise ValueError("minhash of an empty set is undefined")
    return best


def minhash_distance(a: int, b: int) -> int:
    """0 when the signatures collide, 1 otherwise."""
    return 0 if a == b else 1


def jaccard(a: Iterable[int], b: Iterable[int]) -> Fraction:
    """Exact |A intersect B| / |A union B|; 1 for two empty sets."""
    sa, sb = set(a), set(b)
    union = len(sa | sb)
    if union == 0:
        return Fraction(1)
    return Fraction(len(sa & sb), union)
