import pytest

from combiclust.agglomerative import (AgglomerativeError, agglomerative_balanced,
                                      agglomerative_basic, agglomerative_ordinal,
                                      multiset_balanced_agglomeration)
from combiclust.core import Dataset, Partition, ProximityMatrix
from combiclust.multiset import estimate
from combiclust.proximity import proximity_matrix

from cases import (TREE14_EXPECTED, TREE14_ITEMS, TREE14_MERGE_ORDER,
                   USERS9_EXPECTED, USERS9_ROUND1_MERGES, tree14_matrix,
                   users9_published_estimates)


class TestBasic:
    def test_two_items(self):
        z = ProximityMatrix.from_pairs("ab", {("a", "b"): 3.0})
        trace = agglomerative_basic(z)
        assert len(trace.events) == 1
        assert trace.events[0].linkage_value == 3.0

    def test_single_item_empty_trace(self):
        z = ProximityMatrix.from_pairs("a", {})
        trace = agglomerative_basic(z)
        assert trace.events == ()
        assert trace.final == Partition.of(("a",))

    def test_first_merge_on_tree14(self):
        trace = agglomerative_basic(tree14_matrix())
        first = trace.events[0]
        assert {tuple(first.first), tuple(first.second)} == {(2,), (6,)}
        assert first.linkage_value == pytest.approx(0.1)

    def test_absent_proximity_rejected_for_complete(self):
        z = ProximityMatrix.from_pairs((1, 2, 3), {(1, 2): 1.0, (2, 3): 2.0})
        with pytest.raises(AgglomerativeError):
            agglomerative_basic(z, linkage="complete")

    def test_monotone_linkage_for_single_and_complete(self):
        data = Dataset.build({k: (float(k * k % 11), float(k % 5))
                              for k in range(9)})
        z = proximity_matrix(data)
        for linkage in ("single", "complete"):
            trace = agglomerative_basic(z, linkage=linkage)
            vals = [ev.linkage_value for ev in trace.events]
            assert vals == sorted(vals)

    def test_centroid_linkage_midpoint_rule(self):
        data = Dataset.build({1: (0.0,), 2: (1.0,), 3: (10.0,)})
        z = proximity_matrix(data)
        trace = agglomerative_basic(z, linkage="centroid", data=data)
        # after merging 1 and 2 the representative sits at 0.5
        assert trace.events[1].linkage_value == pytest.approx(9.5)

    def test_replay_reproduces_final(self):
        trace = agglomerative_basic(tree14_matrix())
        assert trace.replay(TREE14_ITEMS) == trace.final


class TestBalanced:
    def test_tree14_partition_and_order(self):
        res = agglomerative_balanced(tree14_matrix(), 3)
        assert res.partition == TREE14_EXPECTED
        assert len(res.trace.events) == len(TREE14_MERGE_ORDER)
        for ev, (pair, val) in zip(res.trace.events, TREE14_MERGE_ORDER):
            assert {frozenset(ev.first), frozenset(ev.second)} == \
                {frozenset(pair[1]), frozenset(pair[2])}
            assert ev.linkage_value == pytest.approx(val)

    def test_cap_equal_n_matches_basic(self):
        data = Dataset.build({k: (float(k), 0.0) for k in range(6)})
        z = proximity_matrix(data)
        res = agglomerative_balanced(z, 6)
        assert res.partition == agglomerative_basic(z).final
        assert res.partition == Partition.of(tuple(range(6)))

    def test_cap_one_all_singletons(self):
        res = agglomerative_balanced(tree14_matrix(), 1)
        assert res.partition.size == len(TREE14_ITEMS)
        assert res.trace.events == ()

    def test_no_cluster_exceeds_cap(self):
        for cap in (2, 3, 4, 5):
            res = agglomerative_balanced(tree14_matrix(), cap)
            assert all(len(c) <= cap for c in res.partition.clusters)

    def test_frozen_clusters_never_remerge(self):
        res = agglomerative_balanced(tree14_matrix(), 3)
        frozen_members: set = set()
        for ev in res.trace.events:
            assert not (set(ev.first) & frozen_members)
            assert not (set(ev.second) & frozen_members)
            if len(ev.merged) >= 3:
                frozen_members |= set(ev.merged)

    def test_min_size_flags_undersized_leftovers(self):
        res = agglomerative_balanced(tree14_matrix(), 3, min_size=2)
        assert set(res.undersized) == {(11,), (12,)}

    def test_trace_replays_to_final_partition(self):
        res = agglomerative_balanced(tree14_matrix(), 3)
        assert res.trace.replay(TREE14_ITEMS) == res.partition

    def test_overshoot_merge_skipped(self):
        # sizes 2+2 with cap 3: the cheap cross merge must be skipped
        z = ProximityMatrix.from_pairs(
            (1, 2, 3, 4), {(1, 2): 0.1, (3, 4): 0.2, (2, 3): 0.3})
        res = agglomerative_balanced(z, 3)
        assert res.partition == Partition.of((1, 2), (3, 4))


class TestOrdinalConcurrent:
    LEVELS = {(2, 3): 0, (3, 4): 0, (4, 5): 0, (6, 7): 0, (6, 8): 0,
              (7, 8): 0, (1, 2): 1, (5, 6): 2, (1, 8): 2}

    def test_shared_elements_join_two_groups(self):
        h = agglomerative_ordinal(self.LEVELS, tuple(range(1, 9)),
                                  max_rounds=1)
        parents_of = {}
        for p, c in h.arcs:
            parents_of.setdefault(c, set()).add(p)
        assert len(parents_of[3]) == 2
        assert len(parents_of[4]) == 2
        groups = {frozenset(c for p2, c in h.arcs if p2 == p)
                  for p in h.roots() if str(p).startswith("g")}
        assert frozenset({6, 7, 8}) in groups
        assert frozenset({2, 3}) in groups

    def test_unique_minimum_matches_plain_sequence(self):
        levels = {(1, 2): 0, (2, 3): 1, (1, 3): 2}
        h = agglomerative_ordinal(levels, (1, 2, 3))
        # strictly nested merges: every internal node has one parent at most
        child_parents = {}
        for p, c in h.arcs:
            child_parents.setdefault(c, []).append(p)
        assert all(len(ps) == 1 for ps in child_parents.values())

    def test_two_items_single_merge(self):
        h = agglomerative_ordinal({(1, 2): 0}, (1, 2))
        assert len(h.roots()) == 1


class TestMultisetBalanced:
    def test_round1_concurrent_merges(self):
        res = multiset_balanced_agglomeration(
            users9_published_estimates(), range(1, 10), size_cap=3,
            max_rounds=3)
        round1 = {frozenset(ev.merged) for ev in res.events
                  if ev.round_index == 1}
        assert round1 == {frozenset(s) for s in USERS9_ROUND1_MERGES}

    def test_final_partition(self):
        res = multiset_balanced_agglomeration(
            users9_published_estimates(), range(1, 10), size_cap=3,
            max_rounds=3)
        assert res.partition == USERS9_EXPECTED

    def test_unlimited_rounds_merges_leftovers(self):
        res = multiset_balanced_agglomeration(
            users9_published_estimates(), range(1, 10), size_cap=3)
        assert res.partition == Partition.of((1, 2, 6), (3, 4, 5), (7, 8, 9))

    def test_cap_respected(self):
        res = multiset_balanced_agglomeration(
            users9_published_estimates(), range(1, 10), size_cap=3)
        assert all(len(c) <= 3 for c in res.partition.clusters)

    def test_degenerate_two_items(self):
        res = multiset_balanced_agglomeration(
            {(1, 2): estimate(2, 0)}, (1, 2), size_cap=2)
        assert res.partition == Partition.of((1, 2))
