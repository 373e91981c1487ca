"""Exact combinatorics and the brute-force distance oracles."""

import math
import random
from fractions import Fraction

import pytest

from tunable_lsh import (
    QueryAccess,
    binomial,
    bits_of,
    brute_force_h1_distribution,
    grouping_gamma,
    hamming_distance,
    manhattan_distance,
    prob_good_approx,
    prob_monotonicity_check,
    random_balanced_grouping,
)
from tunable_lsh.core_model import (
    check_collision_probability_exact,
    check_distance_lower_bound,
    check_grouping_ratio,
    check_hamming_manhattan_equivalence,
    check_probability_monotonicity,
)


class TestQueryAccess:
    def test_positions_sorted_and_unique(self):
        q = QueryAccess.from_iterable(3, [5, 1, 5, 2])
        assert q.t == 3
        assert q.positions == (1, 2, 5)

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            QueryAccess(-1, (0,))

    def test_rejects_unsorted_positions(self):
        with pytest.raises(ValueError):
            QueryAccess(0, (2, 1))

    def test_rejects_duplicate_positions(self):
        with pytest.raises(ValueError):
            QueryAccess(0, (1, 1))

    def test_rejects_negative_position(self):
        with pytest.raises(ValueError):
            QueryAccess(0, (-1, 3))


def test_hamming_distance_counts_differing_coordinates():
    assert hamming_distance((0, 1, 1, 0), (1, 1, 0, 0)) == 2
    assert hamming_distance((), ()) == 0


def test_hamming_distance_length_mismatch():
    with pytest.raises(ValueError):
        hamming_distance((0,), (0, 1))


def test_manhattan_distance():
    assert manhattan_distance((0, 3, 7), (2, 3, 1)) == 8
    with pytest.raises(ValueError):
        manhattan_distance((1,), ())


def test_bits_of_window_width():
    assert bits_of(0b1011, 6) == (1, 1, 0, 1, 0, 0)
    assert bits_of(0, 3) == (0, 0, 0)


def test_binomial_matches_math_comb():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randrange(0, 40)
        r = rng.randrange(-2, n + 3)
        assert binomial(n, r) == (math.comb(n, r) if 0 <= r <= n else 0)


def test_binomial_rejects_negative_n():
    with pytest.raises(ValueError):
        binomial(-1, 0)


class TestCollisionProbability:
    """Closed form for landing within theta after a random balanced split."""

    def test_known_values(self):
        assert prob_good_approx(2, 0) == Fraction(1, 2)
        assert prob_good_approx(2, 1) == Fraction(1, 2)
        assert prob_good_approx(4, 2) == Fraction(14, 16)
        assert prob_good_approx(4, 0) == Fraction(6, 16)
        # odd split distance cannot produce a zero gap
        assert prob_good_approx(3, 0) == 0
        assert prob_good_approx(1, 0) == 0

    def test_requires_theta_below_x(self):
        with pytest.raises(ValueError):
            prob_good_approx(3, 3)
        with pytest.raises(ValueError):
            prob_good_approx(0, 0)
        with pytest.raises(ValueError):
            prob_good_approx(2, -1)

    def test_matches_direct_enumeration(self):
        # walk every assignment of x differing bits into two halves
        for x in range(1, 11):
            for theta in range(0, x):
                good = 0
                for split in range(2**x):
                    left = bin(split).count("1")
                    if abs(left - (x - left)) <= theta:
                        good += 1
                assert prob_good_approx(x, theta) == Fraction(good, 2**x)

    def test_strictly_decreasing_in_x(self):
        assert prob_monotonicity_check(0, 16)
        assert prob_monotonicity_check(3, 16)


class TestGroupingGamma:
    def test_spot_values(self):
        assert grouping_gamma(12, 0, 0) == 1
        assert grouping_gamma(12, 2, 1) == Fraction(1, 6)
        assert grouping_gamma(8, 3, 3) == Fraction(1, 56)
        assert grouping_gamma(5, 0, 4) == 1

    def test_symmetric_in_the_two_loads(self):
        for l1 in range(0, 5):
            for l2 in range(0, 5):
                assert grouping_gamma(10, l1, l2) == grouping_gamma(10, l2, l1)

    def test_enumeration_agreement(self):
        # count placements of the smaller load inside the larger one
        k = 9
        for l1 in range(0, 5):
            for l2 in range(0, 5):
                lo, hi = min(l1, l2), max(l1, l2)
                expect = Fraction(math.comb(hi, lo), math.comb(k, lo))
                assert grouping_gamma(k, l1, l2) == expect


def test_random_balanced_grouping_is_balanced():
    rng = random.Random(5)
    for k, b in [(10, 2), (12, 5), (7, 7), (9, 1)]:
        f = random_balanced_grouping(k, b, rng)
        assert len(f) == k
        span = -(-k // b)
        counts = [f.count(g) for g in range(b)]
        assert all(c <= span for c in counts)
        assert sum(counts) == k


def test_brute_force_distribution_total_mass():
    rng = random.Random(3)
    f = random_balanced_grouping(8, 2, rng)
    dist = brute_force_h1_distribution(8, 2, f)
    assert sum(dist.values()) == (2**8) * (2**8)


def test_brute_force_sampled_mode_is_deterministic():
    rng = random.Random(9)
    f = random_balanced_grouping(12, 3, rng)
    a = brute_force_h1_distribution(12, 3, f, sample_pairs=2000, seed=4)
    b = brute_force_h1_distribution(12, 3, f, sample_pairs=2000, seed=4)
    assert a == b


class TestOracleChecks:
    """Smoke the oracle battery at small sizes; acceptance runs full tier."""

    def test_distance_lower_bound_small(self):
        result = check_distance_lower_bound(k=8, bs=(1, 2, 4), mappings_per_b=5)
        assert result.passed, result.detail

    def test_collision_probability_exact_small(self):
        result = check_collision_probability_exact(8)
        assert result.passed, result.detail

    def test_monotonicity_small(self):
        result = check_probability_monotonicity(10)
        assert result.passed, result.detail

    def test_grouping_ratio_small(self):
        result = check_grouping_ratio(8)
        assert result.passed, result.detail

    def test_hamming_manhattan_equivalence_small(self):
        result = check_hamming_manhattan_equivalence(8)
        assert result.passed, result.detail

    def test_mutated_formula_is_caught(self, monkeypatch):
        import tunable_lsh.core_model as cm

        true_fn = prob_good_approx

        def off_by_one(x, theta):
            return true_fn(x, theta + 1) if theta + 1 < x else Fraction(1)

        monkeypatch.setattr(cm, "prob_good_approx", off_by_one)
        result = cm.check_collision_probability_exact(8)
        assert not result.passed
