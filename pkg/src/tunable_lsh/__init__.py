"""Workload-adaptive locality-sensitive hashing with a self-clustering
paged store, a synthetic workload generator, enumeration oracles, and a
benchmark CLI."""

from .core_model import (
    OracleCheck,
    QueryAccess,
    binomial,
    bits_of,
    brute_force_h1_distribution,
    counters_from_bits,
    grouping_gamma,
    hamming_distance,
    manhattan_distance,
    prob_good_approx,
    prob_monotonicity_check,
    random_balanced_grouping,
)
from .curves import hilbert_encode, morton_encode
from .kv_store import (
    PagedStore,
    QueryMetrics,
    QueryStateError,
    StoreError,
    StoreFullError,
)
from .lsh import (
    BitSamplingHasher,
    CounterBank,
    LshConfig,
    StaticHasher,
    TunableLsh,
    bit_sampling_hash,
    static_hash,
    unoptimized_lsh,
    z_value,
)
from .mds_tuner import GroupAssignment, QueryTuner, RoundRobinTuner
from .minhash import jaccard, minhash, minhash_distance, mix64
from .workload import (
    Trace,
    TraceParseError,
    WorkloadSpec,
    generate,
    generate_labeled,
    read_trace,
    write_trace,
)

__version__ = "0.1.0"

__all__ = [
    "BitSamplingHasher",
    "CounterBank",
    "GroupAssignment",
    "LshConfig",
    "OracleCheck",
    "PagedStore",
    "QueryAccess",
    "QueryMetrics",
    "QueryStateError",
    "QueryTuner",
    "RoundRobinTuner",
    "StaticHasher",
    "StoreError",
    "StoreFullError",
    "Trace",
    "TraceParseError",
    "TunableLsh",
    "WorkloadSpec",
    "binomial",
    "bit_sampling_hash",
    "bits_of",
    "brute_force_h1_distribution",
    "counters_from_bits",
    "generate",
    "generate_labeled",
    "grouping_gamma",
    "hamming_distance",
    "hilbert_encode",
    "jaccard",
    "manhattan_distance",
    "minhash",
    "minhash_distance",
    "mix64",
    "morton_encode",
    "prob_good_approx",
    "prob_monotonicity_check",
    "random_balanced_grouping",
    "read_trace",
    "static_hash",
    "unoptimized_lsh",
    "write_trace",
    "z_value",
]
