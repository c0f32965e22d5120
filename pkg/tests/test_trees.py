"""Spanning trees: balance search, uniform sampling, BFS trees, tree IO."""

import collections
import math

import numpy as np
import pytest

from helpers import (
    binomial_band,
    component_sizes_without,
    enumerate_spanning_trees,
    random_tree_edges,
)
from treewavelets import (
    DisconnectedGraphError,
    bfs_spanning_tree,
    build_graph,
    build_spanning_tree,
    cut_size,
    find_balance,
    find_balance_walk,
    gen_complete,
    gen_torus,
    read_tree,
    sample_ust,
    tree_cut_size,
    validate_spanning_tree,
    write_tree,
)


def tree_on(n, edges):
    """A SpanningTree whose host graph is the tree itself."""
    g = build_graph(n, edges)
    return build_spanning_tree(g, edges)


class TestValidateSpanningTree:
    def test_wrong_edge_count(self):
        g = gen_torus(3, 2)
        with pytest.raises(ValueError, match="edges"):
            build_spanning_tree(g, list(g.edges)[: g.n - 2])

    def test_edge_not_in_graph(self):
        g = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        with pytest.raises(ValueError, match="not an edge"):
            build_spanning_tree(g, [(0, 1), (1, 2), (0, 2)])

    def test_cycle_plus_isolated_rejected(self):
        g = build_graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
        with pytest.raises(ValueError):
            build_spanning_tree(g, [(0, 1), (1, 2), (0, 2)])

    def test_valid_tree_accepted(self):
        g = gen_torus(3, 2)
        t = bfs_spanning_tree(g)
        validate_spanning_tree(t)


class TestFindBalance:
    def test_path_five_center(self):
        t = tree_on(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        assert find_balance(t) == 2

    def test_star_center(self):
        t = tree_on(6, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)])
        assert find_balance(t) == 0

    def test_two_vertices(self):
        t = tree_on(2, [(0, 1)])
        assert find_balance(t) in (0, 1)

    def test_subset_restriction(self):
        # Balance of the sub-path {2, 3, 4} alone is its middle vertex.
        t = tree_on(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        assert find_balance(t, [2, 3, 4]) == 3

    def test_disconnected_subset_rejected(self):
        t = tree_on(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        with pytest.raises(ValueError, match="connected"):
            find_balance(t, [0, 4])

    def test_guarantee_on_random_trees(self):
        # Oracle: remove the returned vertex and size the pieces by
        # union-find; none may exceed ceil(n/2). The walk also must not
        # visit more vertices than the tree has.
        rng = np.random.default_rng(42)
        for _ in range(300):
            n = int(rng.integers(2, 80))
            edges = random_tree_edges(n, rng)
            t = tree_on(n, edges)
            v, visits = find_balance_walk(t)
            sizes = component_sizes_without(n, edges, v)
            assert not sizes or sizes[0] <= math.ceil(n / 2)
            assert 1 <= visits <= n

    def test_walk_and_plain_agree(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(2, 40))
            t = tree_on(n, random_tree_edges(n, rng))
            assert find_balance(t) == find_balance_walk(t)[0]


class TestSampleUst:
    def test_tree_graph_returns_itself(self):
        edges = [(0, 1), (1, 2), (1, 3), (3, 4)]
        g = build_graph(5, edges)
        t = sample_ust(g, 0)
        assert t.edges == g.edges

    def test_result_is_spanning_tree(self):
        g = gen_torus(4, 2)
        for seed in range(25):
            validate_spanning_tree(sample_ust(g, seed))

    def test_triangle_uniform(self):
        # The triangle has exactly 3 spanning trees; each should appear
        # about a third of the time.
        g = build_graph(3, [(0, 1), (0, 2), (1, 2)])
        assert len(enumerate_spanning_trees(3, g.edges)) == 3
        draws = 3000
        counts = collections.Counter(sample_ust(g, s).edges for s in range(draws))
        assert len(counts) == 3
        band = binomial_band(1 / 3, draws)
        for c in counts.values():
            assert abs(c / draws - 1 / 3) <= band

    def test_deterministic_in_seed(self):
        g = gen_torus(4, 2)
        assert sample_ust(g, 99).edges == sample_ust(g, 99).edges

    def test_disconnected_rejected(self):
        g = build_graph(4, [(0, 1), (2, 3)])
        with pytest.raises(DisconnectedGraphError):
            sample_ust(g, 0)


class TestBfsTree:
    def test_four_cycle_from_zero(self):
        g = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        t = bfs_spanning_tree(g, 0)
        assert t.edges == ((0, 1), (0, 3), (1, 2))

    def test_complete_graph_is_star(self):
        g = gen_complete(5)
        t = bfs_spanning_tree(g, 2)
        assert t.edges == tuple(sorted((min(2, v), max(2, v)) for v in [0, 1, 3, 4]))

    def test_root_out_of_range(self):
        with pytest.raises(ValueError):
            bfs_spanning_tree(gen_complete(3), 3)


class TestTreeCut:
    def test_tree_cut_at_most_graph_cut(self):
        rng = np.random.default_rng(7)
        g = gen_torus(4, 2)
        for seed in range(40):
            t = sample_ust(g, seed)
            x = (rng.random(g.n) < 0.5).astype(float)
            assert tree_cut_size(t, x) <= cut_size(g, x)

    def test_known_value(self):
        t = tree_on(4, [(0, 1), (1, 2), (2, 3)])
        x = np.array([1.0, 1.0, 0.0, 0.0])
        assert tree_cut_size(t, x) == 1


class TestTreeIO:
    def test_roundtrip(self, tmp_path):
        g = gen_torus(4, 2)
        t = sample_ust(g, 5)
        path = tmp_path / "tree.txt"
        write_tree(t, path)
        back = read_tree(path, g)
        assert back.edges == t.edges

    def test_digest_mismatch_rejected(self, tmp_path):
        g = gen_torus(4, 2)
        other = gen_torus(5, 2)
        t = sample_ust(g, 5)
        path = tmp_path / "tree.txt"
        write_tree(t, path)
        with pytest.raises(ValueError, match="digest"):
            read_tree(path, other)
