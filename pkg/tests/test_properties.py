"""Randomized property suites.

Each run_* function executes a requested number of randomized cases and
returns the count actually verified, raising AssertionError on the first
violation. The acceptance suite re-runs them at the full case budget;
the wrappers here run the same budget so the properties hold standalone.
"""

import math
import random

from tunable_lsh import (
    LshConfig,
    PagedStore,
    QueryAccess,
    StaticHasher,
    StoreFullError,
    TunableLsh,
    minhash,
)
from tunable_lsh.mds_tuner import QueryTuner, RoundRobinTuner

CASES = 10_000


def run_minhash_invariance(cases: int, seed: int = 0) -> int:
    """Signature must not depend on element order or container type."""
    rng = random.Random(seed)
    done = 0
    while done < cases:
        size = rng.randrange(1, 26)
        positions = rng.sample(range(1_000_000), size)
        hash_seed = rng.getrandbits(32)
        reference = minhash(sorted(positions), hash_seed)
        shuffled = positions[:]
        rng.shuffle(shuffled)
        assert minhash(shuffled, hash_seed) == reference
        assert minhash(frozenset(positions), hash_seed) == reference
        assert minhash(reversed(sorted(positions)), hash_seed) == reference
        done += 1
    return done


def run_group_size_bound(cases: int, seed: int = 0) -> int:
    """No group may take more than ceil(k/b) of any k-query window."""
    rng = random.Random(seed)
    shapes = [(8, 3), (12, 4), (16, 5), (9, 9), (10, 1), (7, 2)]
    adaptive = {s: QueryTuner(*s, seed=seed) for s in shapes}
    fixed = {s: RoundRobinTuner(*s) for s in shapes}
    clock = {s: 0 for s in shapes}
    done = 0
    while done < cases:
        shape = shapes[done % len(shapes)]
        k, b = shape
        bound = math.ceil(k / b)
        if done % 2 == 0:
            tuner = adaptive[shape]
            t = clock[shape]
            tuner.reconfigure(
                QueryAccess.from_iterable(t, rng.sample(range(50), rng.randrange(1, 6)))
            )
            clock[shape] = t + 1
            live = min(t + 1, k)
            groups = [tuner.group_of(s) for s in range(t + 1 - live, t + 1)]
            limit = math.ceil(live / b)
            assert limit <= bound
            assert all(0 <= g < b for g in groups)
            for g in set(groups):
                assert groups.count(g) <= limit
        else:
            tuner = fixed[shape]
            start = rng.randrange(10 * k)
            window = [tuner.group_of(t) for t in range(start, start + k)]
            for g in range(b):
                assert window.count(g) <= bound
        done += 1
    return done


def _random_store(rng: random.Random, adaptive: bool) -> PagedStore:
    epsilon = rng.choice((12, 24, 40))
    capacity = rng.choice((2, 4))
    if adaptive:
        config = LshConfig(k=8, b=4, epsilon=epsilon, omega=500)
        hasher = TunableLsh(config, seed=rng.getrandbits(16))
    else:
        hasher = StaticHasher(epsilon, seed=rng.getrandbits(16))
    return PagedStore(hasher, page_size=capacity * 16, record_size=16)


def _store_op(store: PagedStore, keys: list[int], next_key: list[int], rng) -> None:
    room = len(keys) < store.epsilon * store.capacity
    if keys and (rng.random() < 0.55 or not room):
        store.begin_query()
        for key in rng.sample(keys, min(len(keys), rng.randrange(1, 6))):
            store.get(key)
        store.end_query()
    else:
        key = next_key[0]
        next_key[0] += 1
        try:
            store.put(key, key.to_bytes(8, "little") + bytes(8))
            keys.append(key)
        except StoreFullError:
            pass


def run_directory_integrity(cases: int, seed: int = 0) -> int:
    """audit() holds after every operation mix, adaptive or static."""
    rng = random.Random(seed)
    done = 0
    while done < cases:
        store = _random_store(rng, adaptive=done % 2 == 0)
        keys: list[int] = []
        next_key = [0]
        for _ in range(min(cases - done, rng.randrange(40, 120))):
            _store_op(store, keys, next_key, rng)
            store.audit()
            done += 1
    return done


def run_page_capacity(cases: int, seed: int = 0) -> int:
    """Occupancy never exceeds page capacity and never goes negative."""
    rng = random.Random(seed)
    done = 0
    while done < cases:
        store = _random_store(rng, adaptive=True)
        keys: list[int] = []
        next_key = [0]
        for _ in range(min(cases - done, rng.randrange(40, 120))):
            _store_op(store, keys, next_key, rng)
            occupancy = store.page_occupancy()
            assert all(0 <= c <= store.capacity for c in occupancy)
            assert sum(occupancy) == len(store)
            done += 1
    return done


def run_relocation_preservation(cases: int, seed: int = 0) -> int:
    """Every key keeps its exact payload through arbitrary relocation."""
    rng = random.Random(seed)
    done = 0
    while done < cases:
        config = LshConfig(k=8, b=4, epsilon=24, omega=200)
        store = PagedStore(TunableLsh(config, seed=rng.getrandbits(16)),
                           page_size=64, record_size=16)
        payloads = {}
        for key in range(60):
            payload = key.to_bytes(8, "little") + rng.getrandbits(64).to_bytes(8, "little")
            store.put(key, payload, page=key * 24 // 60)
            payloads[key] = payload
        for _ in range(min(cases - done, rng.randrange(100, 300))):
            store.begin_query()
            for key in rng.sample(range(60), rng.randrange(1, 8)):
                store.get(key)
            store.end_query()
            for key in rng.sample(range(60), 3):
                assert store.get(key) == payloads[key]
            done += 1
        assert len(store) == 60
        assert sorted(k for k, _ in store.items()) == list(range(60))
        for key, payload in payloads.items():
            assert store.get(key) == payload
    return done


def test_minhash_invariance_property():
    assert run_minhash_invariance(CASES, seed=11) == CASES


def test_group_size_bound_property():
    assert run_group_size_bound(CASES, seed=12) == CASES


def test_directory_integrity_property():
    assert run_directory_integrity(CASES, seed=13) == CASES


def test_page_capacity_property():
    assert run_page_capacity(CASES, seed=14) == CASES


def test_relocation_preservation_property():
    assert run_relocation_preservation(CASES, seed=15) == CASES
