import itertools
import math

import numpy as np
import pytest

from lbdiv import (CardinalityConcave, GraphCut, MaxTruncation, Permutation,
                   TieRule, averaged_subgradient, extreme_subgradient,
                   has_distinct_extreme_points, induced_ordering,
                   lovasz_extension, tie_consistent_count,
                   tie_consistent_permutations)
from conftest import generator_zoo


def brute_extension(f, x):
    # oracle: the extension is the max of <h_sigma, x> over all permutations
    best = -math.inf
    for items in itertools.permutations(range(1, f.n + 1)):
        h = extreme_subgradient(f, Permutation(items)).values
        best = max(best, float(np.dot(h, x)))
    return best


class TestExtremeSubgradient:
    def test_max_truncation_by_hand(self):
        h = extreme_subgradient(MaxTruncation(2), Permutation([2, 1])).values
        np.testing.assert_allclose(h, [0.0, 1.0])

    def test_cardinality_places_gains_at_ranks(self, rng):
        n = 5
        f = CardinalityConcave.sqrt(n)
        for _ in range(10):
            sigma = Permutation.random(n, rng)
            h = extreme_subgradient(f, sigma).values
            for i in range(1, n + 1):
                assert h[sigma(i) - 1] == pytest.approx(f.gains[i - 1])

    def test_graph_cut_by_hand(self):
        h = extreme_subgradient(GraphCut.uniform(2), Permutation([1, 2])).values
        np.testing.assert_allclose(h, [1.0, -1.0])

    def test_telescopes_to_full_set(self, rng):
        for f in generator_zoo(rng, 6):
            sigma = Permutation.random(6, rng)
            h = extreme_subgradient(f, sigma).values
            assert h.sum() == pytest.approx(f(range(1, 7)), abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            extreme_subgradient(MaxTruncation(3), Permutation([1, 2]))


class TestLovaszExtension:
    def test_vertex_tightness(self, rng):
        for n in (2, 4, 10):
            for f in generator_zoo(rng, n):
                for mask in range(1 << n):
                    A = {i + 1 for i in range(n) if mask >> i & 1}
                    ind = np.zeros(n)
                    for i in A:
                        ind[i - 1] = 1.0
                    assert lovasz_extension(f, ind) == pytest.approx(
                        f(A), abs=1e-12)

    def test_greedy_formula_by_hand(self):
        f = CardinalityConcave.sqrt(2)
        assert lovasz_extension(f, [1.0, 0.5]) == pytest.approx(
            1 + 0.5 * (math.sqrt(2) - 1), abs=1e-12)

    def test_zero_vector(self, rng):
        for f in generator_zoo(rng, 4):
            assert lovasz_extension(f, np.zeros(4)) == 0.0

    def test_greedy_consistency(self, rng):
        for f in generator_zoo(rng, 5):
            for _ in range(50):
                x = rng.standard_normal(5)
                sigma = induced_ordering(x)
                h = extreme_subgradient(f, sigma).values
                assert lovasz_extension(f, x) == pytest.approx(
                    float(x @ h), rel=1e-12, abs=1e-12)

    def test_matches_enumeration_oracle(self, rng):
        for f in generator_zoo(rng, 4):
            for _ in range(20):
                x = rng.random(4)
                assert lovasz_extension(f, x) == pytest.approx(
                    brute_extension(f, x), abs=1e-10)

    def test_subgradient_inequality(self, rng):
        for f in generator_zoo(rng, 6):
            for _ in range(30):
                x, y = rng.random(6), rng.random(6)
                h = extreme_subgradient(f, induced_ordering(y)).values
                assert lovasz_extension(f, x) >= \
                    lovasz_extension(f, y) + float(h @ (x - y)) - 1e-9

    def test_convexity_along_segments(self, rng):
        for f in generator_zoo(rng, 5):
            for _ in range(30):
                x, y = rng.random(5), rng.random(5)
                lam = rng.random()
                assert lovasz_extension(f, lam * x + (1 - lam) * y) <= \
                    lam * lovasz_extension(f, x) + \
                    (1 - lam) * lovasz_extension(f, y) + 1e-9

    def test_tie_rule_independence(self, rng):
        f = CardinalityConcave.sqrt(4)
        x = np.array([0.5, 0.2, 0.5, 0.2])
        value = lovasz_extension(f, x, TieRule.LOWEST_INDEX_FIRST)
        for sigma in tie_consistent_permutations(x):
            h = extreme_subgradient(f, sigma).values
            assert float(x @ h) == pytest.approx(value, abs=1e-12)
        y = rng.random(4)
        assert lovasz_extension(f, y, TieRule.REJECT) == \
            lovasz_extension(f, y, TieRule.LOWEST_INDEX_FIRST)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            lovasz_extension(MaxTruncation(3), [1.0, 0.0])


class TestTieEnumeration:
    def test_count(self):
        assert tie_consistent_count([0.5, 0.5, 0.1]) == 2
        assert tie_consistent_count([1.0, 1.0, 1.0]) == 6
        assert tie_consistent_count([3.0, 2.0, 1.0]) == 1

    def test_permutations_sort_descending(self):
        y = np.array([0.1, 0.5, 0.5])
        perms = list(tie_consistent_permutations(y))
        assert len(perms) == 2
        for sigma in perms:
            vals = [y[sigma(i) - 1] for i in range(1, 4)]
            assert vals == sorted(vals, reverse=True)


class TestAveragedSubgradient:
    def test_totally_ordered_equals_extreme(self, rng):
        for f in generator_zoo(rng, 4):
            x = np.array([0.9, 0.1, 0.6, 0.3])
            np.testing.assert_allclose(
                averaged_subgradient(f, x),
                extreme_subgradient(f, induced_ordering(x)).values)

    def test_two_way_tie_average(self):
        f = CardinalityConcave.sqrt(2)
        np.testing.assert_allclose(
            averaged_subgradient(f, [0.5, 0.5]),
            [math.sqrt(2) / 2, math.sqrt(2) / 2], atol=1e-12)

    def test_origin_plain_average_vs_pin(self):
        f = CardinalityConcave.sqrt(3)
        plain = averaged_subgradient(f, np.zeros(3))
        # mean over all orderings spreads f(V) evenly
        np.testing.assert_allclose(plain, np.full(3, math.sqrt(3) / 3),
                                   atol=1e-12)
        np.testing.assert_array_equal(
            averaged_subgradient(f, np.zeros(3), zero_at_origin=True),
            np.zeros(3))

    def test_enumeration_cap(self):
        f = CardinalityConcave.sqrt(9)
        with pytest.raises(ValueError):
            averaged_subgradient(f, np.zeros(9))  # 9! > 8!
        averaged_subgradient(f, np.zeros(9), cap=math.factorial(9))


class TestDistinctExtremePoints:
    def test_strictly_decreasing_gains_distinct(self):
        assert has_distinct_extreme_points(CardinalityConcave.sqrt(4))

    def test_tied_gains_not_distinct(self):
        assert not has_distinct_extreme_points(
            CardinalityConcave(np.ones(3)))

    def test_limit(self):
        with pytest.raises(ValueError):
            has_distinct_extreme_points(CardinalityConcave.sqrt(9))
