"""Space-filling curve encodings for fixed-width integer grids.

Morton (bit interleaving) is the default projection; Hilbert is available
behind the same signature for callers that need unit-step locality along
the curve. Both take one coordinate per dimension, each in [0, 2^bits).
"""

from __future__ import annotations

from typing import Sequence


def _check_coords(coords: Sequence[int], bits: int) -> None:
    if bits <= 0:
        raise ValueError("bits must be positive")
    if not coords:
        raise ValueError("need at least one coordinate")
    limit = 1 << bits
    for c in coords:
        if not 0 <= c < limit:
            raise ValueError(f"coordinate {c} outside [0, {limit})")


def morton_encode(coords: Sequence[int], bits: int) -> int:
    """Interleave coordinate bits, dimension 0 least significant."""
    _check_coords(coords, bits)
    ndims = len(coords)
    code = 0
    for j, c in enumerate(coords):
        for i in range(bits):
            code |= ((c >> i) & 1) << (i * ndims + j)
    return code


def hilbert_encode(coords: Sequence[int], bits: int) -> int:
    """Hilbert curve index via the transpose-form axis transform.

    Consecutive indices differ by exactly one unit step in one dimension,
    which Morton codes do not guarantee.
    """
    _check_coords(coords, bits)
    x = list(coords)
    n = len(x)
    # fold axes into transpose form
    q = 1 << (bits - 1)
    while q > 1:
        p = q - 1
        for i in range(n):
            if x[i] & q:
                x[0] ^= p
            else:
                t = (x[0] ^ x[i]) & p
                x[0] ^= t
                x[i] ^= t
        q >>= 1
    for i in range(1, n):
        x[i] ^= x[i - 1]
    t = 0
    q = 1 << (bits - 1)
    while q > 1:
        if x[n - 1] & q:
            t ^= q - 1
        q >>= 1
    for i in range(n):
        x[i] ^= t
    # untranspose, dimension 0 most significant within each level
    code = 0
    for i in range(bits - 1, -1, -1):
        for j in range(n):
            code = (code << 1) | ((x[j] >> i) & 1)
    return code


CURVES = {
    "morton": morton_encode,
    "hilbert": hilbert_encode,
}
