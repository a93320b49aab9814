import random
from itertools import combinations

import pytest

from combiclust.core import Partition, ProximityMatrix, WeightedGraph
from combiclust.graphclust import (GraphClusteringError, adaptive_mst_clustering,
                                   clique_clustering, cluster_tree,
                                   connected_components, correlation_greedy,
                                   edge_betweenness, girvan_newman,
                                   maximum_clique, minimum_spanning_tree,
                                   modularity_greedy, mst_clustering)
from combiclust.core import Dataset, SignedWeightedGraph
from combiclust.quality import correlation_objective, modularity

from cases import (NET12_DRAWN_TREE, NET12_EXPECTED, SIGNED11_EXPECTED,
                   SIGNED11_FINAL_OBJECTIVE, SIGNED11_MERGE_SEQUENCE,
                   net12_drawn_tree, net12_graph, net12_matrix,
                   signed11_graph)


def brute_force_mst_weight(g: WeightedGraph) -> float:
    """Oracle: minimum total weight over all spanning edge subsets."""
    n = g.n
    best = None
    for subset in combinations(g.edges, n - 1):
        sub = WeightedGraph.build(g.vertices, subset)
        if len(connected_components(sub)) == 1:
            w = sum(e[2] for e in subset)
            best = w if best is None else min(best, w)
    return best


def random_connected_graph(rng: random.Random, n: int) -> WeightedGraph:
    verts = list(range(n))
    edges = {}
    shuffled = verts[:]
    rng.shuffle(shuffled)
    for a, b in zip(shuffled, shuffled[1:]):
        u, v = min(a, b), max(a, b)
        edges[(u, v)] = round(rng.uniform(0.1, 5.0), 3)
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < 0.4:
                edges[(u, v)] = round(rng.uniform(0.1, 5.0), 3)
    return WeightedGraph.build(verts, [(u, v, w) for (u, v), w in edges.items()])


class TestMst:
    def test_triangle(self):
        g = WeightedGraph.build("abc", [("a", "b", 1.0), ("b", "c", 2.0),
                                        ("a", "c", 3.0)])
        t = minimum_spanning_tree(g)
        assert t.edge_set() == frozenset({("a", "b"), ("b", "c")})
        assert sum(w for _, _, w in t.edges) == 3.0

    def test_tree_shape(self):
        t = minimum_spanning_tree(net12_graph())
        assert t.p == t.n - 1
        assert len(connected_components(t)) == 1

    def test_disconnected_reports_components(self):
        g = WeightedGraph.build((1, 2, 3, 4), [(1, 2, 1.0), (3, 4, 1.0)])
        with pytest.raises(GraphClusteringError, match="2 components"):
            minimum_spanning_tree(g)

    def test_against_brute_force_oracle(self):
        rng = random.Random(42)
        for _ in range(100):
            g = random_connected_graph(rng, rng.randint(3, 7))
            t = minimum_spanning_tree(g)
            assert sum(w for _, _, w in t.edges) == pytest.approx(
                brute_force_mst_weight(g))

    def test_net12_tree_weight_beats_drawn_tree(self):
        # the drawn tree that accompanies this instance is not minimal
        t = minimum_spanning_tree(net12_graph())
        kruskal_weight = sum(w for _, _, w in t.edges)
        assert kruskal_weight == pytest.approx(3.35)
        assert kruskal_weight < sum(NET12_DRAWN_TREE.values())


class TestTreeClustering:
    def test_drawn_tree_clusters(self):
        res = cluster_tree(net12_drawn_tree(), 4)
        assert res.partition == NET12_EXPECTED

    def test_clusters_connected_in_tree(self):
        tree = minimum_spanning_tree(net12_graph())
        res = cluster_tree(tree, 4)
        adj = tree.adjacency()
        for cluster in res.partition.clusters:
            members = set(cluster)
            seen = {cluster[0]}
            frontier = [cluster[0]]
            while frontier:
                u = frontier.pop()
                for v in adj[u]:
                    if v in members and v not in seen:
                        seen.add(v)
                        frontier.append(v)
            assert seen == members

    def test_mst_clustering_runs_whole_pipeline(self):
        res = mst_clustering(net12_matrix(), 4)
        assert all(len(c) <= 4 for c in res.partition.clusters)

    def test_singleton_matrix(self):
        z = ProximityMatrix.from_pairs("a", {})
        res = mst_clustering(z, 4)
        assert res.partition == Partition.of(("a",))

    def test_cap_one_all_singletons(self):
        res = mst_clustering(net12_matrix(), 1)
        assert res.partition.size == 12


class TestAdaptiveMst:
    def test_two_items(self):
        data = Dataset.build({1: (0.0, 0.0), 2: (1.0, 1.0)})
        res = adaptive_mst_clustering(data, 5, 1, 2)
        assert res.partition == Partition.of((1, 2))
        assert res.delta_used == 1

    def test_sizes_bounded_and_connected_at_some_level(self):
        data = Dataset.build({k: (float(k % 4), float(k // 4)) for k in range(10)})
        res = adaptive_mst_clustering(data, 5, 1, 3)
        assert 1 <= res.delta_used <= 5
        assert all(len(c) <= 3 for c in res.partition.clusters)

    def test_connected_level1_matches_plain_mst_clustering(self):
        data = Dataset.build({1: (0.0,), 2: (0.1,), 3: (0.2,)})
        res = adaptive_mst_clustering(data, 5, 1, 3)
        assert res.delta_used == 1
        from combiclust.proximity import proximity_matrix
        plain = mst_clustering(proximity_matrix(data), 3)
        assert res.partition == plain.partition


def brute_force_max_clique_size(g: WeightedGraph) -> int:
    adj = {v: set(d) for v, d in g.adjacency().items()}
    best = 0
    verts = list(g.vertices)
    for r in range(1, len(verts) + 1):
        for combo in combinations(verts, r):
            if all(b in adj[a] for a, b in combinations(combo, 2)):
                best = max(best, r)
    return best


class TestCliques:
    def test_k4(self):
        g = WeightedGraph.build("abcd", [(u, v, 1.0) for u, v in
                                         combinations("abcd", 2)])
        assert maximum_clique(g) == ("a", "b", "c", "d")

    def test_edgeless_graph_single_vertex(self):
        g = WeightedGraph.build("cab", [])
        assert maximum_clique(g) == ("a",)

    def test_against_enumeration_oracle(self):
        rng = random.Random(5)
        for _ in range(40):
            n = rng.randint(2, 10)
            edges = [(u, v, 1.0) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.5]
            g = WeightedGraph.build(list(range(n)), edges)
            got = maximum_clique(g)
            assert len(got) == brute_force_max_clique_size(g)

    def test_clique_clustering_two_triangles(self):
        g = WeightedGraph.build(range(6),
                                [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
                                 (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)])
        assert clique_clustering(g) == Partition.of((0, 1, 2), (3, 4, 5))

    def test_clique_clustering_k4_plus_pendant(self):
        edges = [(u, v, 1.0) for u, v in combinations(range(4), 2)]
        edges.append((3, 4, 1.0))
        g = WeightedGraph.build(range(5), edges)
        assert clique_clustering(g) == Partition.of((0, 1, 2, 3), (4,))

    def test_clique_clustering_edgeless(self):
        g = WeightedGraph.build(range(4), [])
        assert clique_clustering(g).size == 4


class TestCorrelationGreedy:
    def test_merge_sequence(self):
        res = correlation_greedy(signed11_graph(), 15.0)
        got = tuple((set(a), set(b)) for a, b in
                    (pt.merged_pair for pt in res.trace))
        want = tuple((set(a), set(b)) for a, b in SIGNED11_MERGE_SEQUENCE)
        normalize = lambda seq: [frozenset(map(frozenset, pair)) for pair in seq]
        assert normalize(got) == normalize(want)

    def test_final_partition_and_objective(self):
        res = correlation_greedy(signed11_graph(), 15.0)
        assert res.partition == SIGNED11_EXPECTED
        assert res.objective.disagreement == pytest.approx(
            SIGNED11_FINAL_OBJECTIVE[0], abs=1e-9)
        assert res.objective.agreement == pytest.approx(
            SIGNED11_FINAL_OBJECTIVE[1], abs=1e-9)

    def test_agreement_strictly_increases(self):
        res = correlation_greedy(signed11_graph(), 15.0)
        agrs = [pt.objective[1] for pt in res.trace]
        assert all(b > a for a, b in zip(agrs, agrs[1:]))

    def test_budget_respected_and_objective_consistent(self):
        g = signed11_graph()
        for budget in (0.0, 1.0, 5.0, 15.0):
            res = correlation_greedy(g, budget)
            assert abs(res.objective.disagreement) <= budget + 1e-9
            for pt in res.trace:
                assert abs(pt.objective[0]) <= budget + 1e-9

    def test_trace_points_match_recomputation(self):
        g = signed11_graph()
        res = correlation_greedy(g, 15.0)
        # replay the merges and recompute the objective at every step
        clusters = [frozenset([v]) for v in g.vertices]
        for pt in res.trace:
            a, b = map(frozenset, pt.merged_pair)
            clusters = [c for c in clusters if c not in (a, b)]
            clusters.append(a | b)
            score = correlation_objective(g, Partition.of(*clusters))
            assert score.disagreement == pytest.approx(pt.objective[0])
            assert score.agreement == pytest.approx(pt.objective[1])

    def test_only_negative_edges_stays_singleton(self):
        g = SignedWeightedGraph.build(
            "abc", [("a", "b", -1.0), ("b", "c", -2.0), ("a", "c", -0.5)])
        res = correlation_greedy(g, 100.0)
        assert res.partition.size == 3
        assert res.trace == ()


class TestModularityGreedy:
    def test_two_triangles_with_bridge(self):
        g = WeightedGraph.build(
            range(6), [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
                       (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, 1.0)])
        res = modularity_greedy(g)
        assert res.partition == Partition.of((0, 1, 2), (3, 4, 5))

    def test_single_edge_endpoints_merge(self):
        g = WeightedGraph.build("ab", [("a", "b", 1.0)])
        res = modularity_greedy(g)
        assert res.partition == Partition.of(("a", "b"))
        assert res.modularity.total == pytest.approx(0.0)

    def test_complete_graph_three_vertices_collapses(self):
        g = WeightedGraph.build(range(3), [(u, v, 1.0) for u, v in
                                           combinations(range(3), 2)])
        res = modularity_greedy(g)
        assert res.partition == Partition.of((0, 1, 2))
        assert res.modularity.total == pytest.approx(0.0)

    def test_complete_graph_all_in_one_is_global_maximum(self):
        # on K4 the single cluster scores 0 and no partition beats it, but
        # every pairwise merge from singletons strictly lowers the score,
        # so the strictly-improving greedy halts at singletons
        g = WeightedGraph.build(range(4), [(u, v, 1.0) for u, v in
                                           combinations(range(4), 2)])
        from combiclust.compare import _restricted_growth_partitions
        best = max(modularity(g, p).total
                   for p in _restricted_growth_partitions(list(range(4)), 1, 4))
        assert best == pytest.approx(0.0)
        res = modularity_greedy(g)
        assert res.merges == ()
        assert res.partition.size == 4

    def test_monotone_increase(self):
        rng = random.Random(3)
        for _ in range(10):
            g = random_connected_graph(rng, rng.randint(3, 7))
            res = modularity_greedy(g)
            qs = [q for _, _, q in res.merges]
            assert qs == sorted(qs)
            if qs:
                base = modularity(
                    g, Partition.of(*[(v,) for v in g.vertices])).total
                assert qs[0] > base


class TestBetweennessAndGn:
    def test_path_graph(self):
        g = WeightedGraph.build("abc", [("a", "b", 1.0), ("b", "c", 1.0)])
        eb = edge_betweenness(g)
        assert eb[("a", "b")] == pytest.approx(2.0)
        assert eb[("b", "c")] == pytest.approx(2.0)

    def test_single_edge(self):
        g = WeightedGraph.build("ab", [("a", "b", 1.0)])
        assert edge_betweenness(g)[("a", "b")] == pytest.approx(1.0)

    def test_bridge_has_strict_maximum(self):
        g = WeightedGraph.build(
            range(6), [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
                       (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, 1.0)])
        eb = edge_betweenness(g)
        bridge = eb[(2, 3)]
        assert all(bridge > v for e, v in eb.items() if e != (2, 3))

    def test_gn_splits_triangles(self):
        g = WeightedGraph.build(
            range(6), [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
                       (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, 1.0)])
        res = girvan_newman(g, 2)
        assert res.partition == Partition.of((0, 1, 2), (3, 4, 5))
        assert res.removed[0] == (2, 3)

    def test_gn_target_equal_current(self):
        g = WeightedGraph.build((1, 2, 3, 4), [(1, 2, 1.0), (3, 4, 1.0)])
        res = girvan_newman(g, 2)
        assert res.partition == Partition.of((1, 2), (3, 4))
        assert res.removed == ()

    def test_gn_all_singletons(self):
        g = WeightedGraph.build("abc", [("a", "b", 1.0), ("b", "c", 1.0)])
        res = girvan_newman(g, 3)
        assert res.partition.size == 3

    def test_gn_target_too_large(self):
        g = WeightedGraph.build("ab", [("a", "b", 1.0)])
        with pytest.raises(GraphClusteringError):
            girvan_newman(g, 3)

    def test_gn_component_count_nondecreasing(self):
        rng = random.Random(17)
        g = random_connected_graph(rng, 7)
        res = girvan_newman(g, 7)
        current = g
        prev = 1
        for edge in res.removed:
            current = WeightedGraph.build(
                current.vertices,
                [(a, b, w) for a, b, w in current.edges if (a, b) != edge])
            count = len(connected_components(current))
            assert count >= prev
            prev = count
