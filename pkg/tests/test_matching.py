"""Tests for the matching oracle, locality checks, local search, and
cycle decomposition."""

import itertools
import math

import pytest

from localmatch.generators import gen_random
from localmatch.geometry import Point
from localmatch.matching import (
    CapExceededError,
    Matching,
    PointSet,
    cycle_decomposition,
    enumerate_matchings,
    greedy_matching,
    is_k_local_max,
    is_k_local_min,
    k_local_search,
    optimal_matching,
    ratio_report,
    weight,
)

SQRT2 = math.sqrt(2.0)


def unit_square():
    return PointSet([Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)])


def brute_force_weight(ps, objective="maximize"):
    pick = max if objective == "maximize" else min
    return pick(weight(m, ps) for m in enumerate_matchings(ps))


class TestPointSet:
    def test_rejects_coincident_points(self):
        with pytest.raises(ValueError):
            PointSet([Point(0, 0), Point(0, 0), Point(1, 0), Point(2, 3)])

    def test_distance_matrix(self):
        ps = unit_square()
        assert ps.dist[0][2] == pytest.approx(SQRT2)
        assert ps.dist[1][1] == 0.0


class TestMatchingType:
    def test_normalizes_pairs(self):
        m = Matching([(3, 0), (2, 1)])
        assert m.pairs == ((0, 3), (1, 2))

    def test_rejects_reused_index(self):
        with pytest.raises(ValueError):
            Matching([(0, 1), (1, 2)])

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Matching([(2, 2)])


class TestWeight:
    def test_single_edge(self):
        ps = PointSet([Point(0, 0), Point(3, 4)])
        assert weight(Matching([(0, 1)]), ps) == 5.0

    def test_two_unit_edges(self):
        ps = PointSet([Point(0, 0), Point(1, 0), Point(0, 5), Point(1, 5)])
        assert weight(Matching([(0, 1), (2, 3)]), ps) == 2.0

    def test_empty(self):
        assert weight(Matching([]), PointSet([])) == 0.0

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            weight(Matching([(0, 7)]), unit_square())


class TestOptimalMatching:
    def test_two_points(self):
        ps = PointSet([Point(0, 0), Point(1, 2)])
        assert optimal_matching(ps).pairs == ((0, 1),)

    def test_square_maximize_takes_diagonals(self):
        ps = unit_square()
        m = optimal_matching(ps, "maximize")
        assert m.pairs == ((0, 2), (1, 3))
        assert weight(m, ps) == pytest.approx(2 * SQRT2)

    def test_square_minimize_takes_opposite_sides(self):
        ps = unit_square()
        m = optimal_matching(ps, "minimize")
        assert weight(m, ps) == pytest.approx(2.0)
        assert m.pairs == ((0, 1), (2, 3))  # lexicographically smallest optimum

    def test_odd_cardinality_rejected(self):
        with pytest.raises(ValueError):
            optimal_matching(PointSet([Point(0, 0), Point(1, 0), Point(0, 1)]))

    def test_cap(self):
        ps = gen_random(8, seed=0)
        with pytest.raises(CapExceededError):
            optimal_matching(ps, cap=3)

    def test_matches_enumeration_both_objectives(self):
        for i in range(120):
            ps = gen_random(4 + 2 * (i % 4), seed=9000 + i)
            for objective in ("maximize", "minimize"):
                w = weight(optimal_matching(ps, objective), ps)
                assert w == pytest.approx(
                    brute_force_weight(ps, objective), rel=1e-9
                )


class TestEnumerateMatchings:
    @pytest.mark.parametrize("n,count", [(2, 1), (4, 3), (6, 15), (8, 105)])
    def test_counts(self, n, count):
        ps = gen_random(n, seed=n)
        assert sum(1 for _ in enumerate_matchings(ps)) == count

    def test_distinct_and_perfect(self):
        ps = gen_random(8, seed=1)
        seen = set()
        for m in enumerate_matchings(ps):
            assert m.is_perfect_on(ps)
            assert m.pairs not in seen
            seen.add(m.pairs)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            list(enumerate_matchings(gen_random(14, seed=2)))


class TestIsKLocal:
    def test_any_matching_is_1_local(self):
        for seed in range(5):
            ps = gen_random(8, seed=seed)
            worst = min(enumerate_matchings(ps), key=lambda m: weight(m, ps))
            assert is_k_local_max(ps, worst, 1).is_local_max

    def test_square_sides_violate_k2(self):
        ps = unit_square()
        report = is_k_local_max(ps, Matching([(0, 1), (2, 3)]), 2)
        assert not report.is_local_max
        assert report.violating_subset == ((0, 1), (2, 3))

    def test_square_diagonals_pass_k2(self):
        ps = unit_square()
        assert is_k_local_max(ps, Matching([(0, 2), (1, 3)]), 2).is_local_max

    def test_k_out_of_range(self):
        ps = unit_square()
        with pytest.raises(ValueError):
            is_k_local_max(ps, Matching([(0, 2), (1, 3)]), 3)

    def test_global_maximum_is_k_local_for_every_k(self):
        for seed in range(30):
            ps = gen_random(4 + 2 * (seed % 4), seed=300 + seed)
            opt = optimal_matching(ps)
            for k in range(1, len(opt) + 1):
                assert is_k_local_max(ps, opt, k).is_local_max

    def test_locality_is_monotone_downward(self):
        # Passing at k implies passing at every smaller k.
        for seed in range(40):
            ps = gen_random(8, seed=600 + seed)
            for m in itertools.islice(enumerate_matchings(ps), 20):
                verdicts = [
                    is_k_local_max(ps, m, k).is_local_max for k in range(1, 5)
                ]
                for small, big in zip(verdicts, verdicts[1:]):
                    if big:
                        assert small

    def test_min_variant_mirrors_max(self):
        ps = unit_square()
        sides = Matching([(0, 1), (2, 3)])
        assert is_k_local_min(ps, sides, 2).is_local_max
        diag = Matching([(0, 2), (1, 3)])
        assert not is_k_local_min(ps, diag, 2).is_local_max


class TestKLocalSearch:
    def test_square_sides_improve_to_diagonals(self):
        ps = unit_square()
        out = k_local_search(ps, 2, init=Matching([(0, 1), (2, 3)]))
        assert out.pairs == ((0, 2), (1, 3))

    def test_fixpoint_returned_unchanged(self):
        ps = unit_square()
        diag = Matching([(0, 2), (1, 3)])
        assert k_local_search(ps, 2, init=diag) is diag

    def test_output_is_k_local_and_not_worse_than_init(self):
        for seed in range(25):
            ps = gen_random(6 + 2 * (seed % 3), seed=1200 + seed)
            init = greedy_matching(ps)
            for k in (2, 3):
                out = k_local_search(ps, k, init=init)
                assert is_k_local_max(ps, out, k).is_local_max
                assert weight(out, ps) >= weight(init, ps) - 1e-12

    def test_three_local_search_hits_sqrt3_over_2(self):
        for seed in range(20):
            ps = gen_random(6, seed=1400 + seed)
            out = k_local_search(ps, 3)
            oracle = brute_force_weight(ps)
            assert weight(out, ps) >= (math.sqrt(3) / 2 - 1e-9) * oracle

    def test_weight_sequence_strictly_increases(self):
        # Re-drive the search one swap at a time through the public
        # interface: apply the reported violating subset's optimal
        # re-matching and watch the weight climb to the search's fixpoint.
        for seed in range(10):
            ps = gen_random(8, seed=1800 + seed)
            m = min(enumerate_matchings(ps), key=lambda m: weight(m, ps))
            weights = [weight(m, ps)]
            for _ in range(200):
                report = is_k_local_max(ps, m, 2)
                if report.is_local_max:
                    break
                subset = set(report.violating_subset)
                endpoints = sorted(i for pair in subset for i in pair)
                sub = PointSet([ps[i] for i in endpoints])
                repl = optimal_matching(sub, "maximize")
                kept = [p for p in m.pairs if p not in subset]
                kept += [(endpoints[i], endpoints[j]) for i, j in repl.pairs]
                m = Matching(kept)
                weights.append(weight(m, ps))
            else:
                pytest.fail("local search did not terminate")
            assert all(b > a for a, b in zip(weights, weights[1:]))
            assert m.pairs == k_local_search(ps, 2, init=min(
                enumerate_matchings(ps), key=lambda m: weight(m, ps)
            )).pairs

    def test_greedy_init_is_half_approximation(self):
        for seed in range(20):
            ps = gen_random(8, seed=1600 + seed)
            g = greedy_matching(ps)
            assert weight(g, ps) >= 0.5 * brute_force_weight(ps) - 1e-12


class TestCycleDecomposition:
    def test_identical_matchings_all_shared(self):
        ps = gen_random(8, seed=7)
        m = optimal_matching(ps)
        dec = cycle_decomposition(m, m)
        assert dec.shared == m.pairs
        assert dec.cycles == ()

    def test_square_sides_vs_diagonals(self):
        dec = cycle_decomposition(Matching([(0, 1), (2, 3)]), Matching([(0, 2), (1, 3)]))
        assert dec.shared == ()
        assert len(dec.cycles) == 1
        assert len(dec.cycles[0].vertices) == 4

    def test_six_point_disjoint_matchings_single_cycle(self):
        m1 = Matching([(0, 1), (2, 3), (4, 5)])
        m2 = Matching([(1, 2), (3, 4), (0, 5)])
        dec = cycle_decomposition(m1, m2)
        assert len(dec.cycles) == 1
        cycle = dec.cycles[0]
        assert len(cycle.vertices) == 6
        assert set(cycle.first_edges()) == set(m1.pairs)
        assert {tuple(sorted(e)) for e in cycle.second_edges()} == set(m2.pairs)

    def test_mismatched_point_sets(self):
        with pytest.raises(ValueError):
            cycle_decomposition(Matching([(0, 1)]), Matching([(2, 3)]))

    def test_alternation_on_random_instances(self):
        for seed in range(20):
            ps = gen_random(10, seed=2000 + seed)
            m1 = greedy_matching(ps)
            m2 = optimal_matching(ps)
            dec = cycle_decomposition(m1, m2)
            edges1 = set(m1.pairs)
            edges2 = set(m2.pairs)
            for cycle in dec.cycles:
                assert len(cycle.vertices) >= 4 and len(cycle.vertices) % 2 == 0
                for e in cycle.first_edges():
                    assert tuple(sorted(e)) in edges1
                for e in cycle.second_edges():
                    assert tuple(sorted(e)) in edges2


class TestRatioReport:
    def test_global_maximum_has_ratio_one(self):
        ps = gen_random(8, seed=42)
        m = optimal_matching(ps)
        rep = ratio_report(ps, m, 2)
        assert rep.ratio == pytest.approx(1.0)
        assert rep.is_local_max

    def test_two_local_bound(self):
        for seed in range(15):
            ps = gen_random(6 + 2 * (seed % 3), seed=2500 + seed)
            m = k_local_search(ps, 2)
            rep = ratio_report(ps, m, 2)
            assert rep.is_local_max
            assert rep.ratio >= math.sqrt(3.0 / 7.0) - 1e-9

    def test_three_local_bound(self):
        for seed in range(15):
            ps = gen_random(6 + 2 * (seed % 3), seed=2700 + seed)
            m = k_local_search(ps, 3)
            rep = ratio_report(ps, m, 3)
            assert rep.is_local_max
            assert rep.ratio >= math.sqrt(3.0) / 2.0 - 1e-9

    def test_cap_enforced(self):
        ps = gen_random(8, seed=3)
        with pytest.raises(CapExceededError):
            ratio_report(ps, optimal_matching(ps), 2, cap=2)
