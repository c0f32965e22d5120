"""Wavelet construction: orthonormality, sparsity, and activation bounds."""

import math

import numpy as np
import pytest

from helpers import random_tree_edges
from treewavelets import (
    activation_bound,
    apply_basis,
    basis_sparsity,
    build_basis,
    build_graph,
    build_spanning_tree,
    cut_size,
    edge_activations,
    form_wavelets,
    gen_complete,
    gen_torus,
    sample_ust,
    tree_cut_size,
    write_basis_csv,
)


def tree_on(n, edges):
    g = build_graph(n, edges)
    return build_spanning_tree(g, edges)


def random_tree(n, rng):
    return tree_on(n, random_tree_edges(n, rng))


def dense_for(element, n):
    v = np.zeros(n)
    v[element.vertices] = element.values
    return v


class TestFormWavelets:
    def test_two_singletons(self):
        (el,) = form_wavelets([[0], [1]])
        v = dense_for(el, 2)
        np.testing.assert_allclose(v, [1 / math.sqrt(2), -1 / math.sqrt(2)])

    def test_first_group_gets_positive_sign(self):
        (el,) = form_wavelets([[1], [0]])
        v = dense_for(el, 2)
        np.testing.assert_allclose(v, [-1 / math.sqrt(2), 1 / math.sqrt(2)])

    def test_one_against_three(self):
        # sqrt(n2/(n1 (n1+n2))) on the small side, -sqrt(n1/(n2 (n1+n2)))
        # on the large one.
        (el,) = form_wavelets([[0], [1, 2, 3]])
        v = dense_for(el, 4)
        np.testing.assert_allclose(
            v, [math.sqrt(3) / 2, -math.sqrt(3) / 6, -math.sqrt(3) / 6, -math.sqrt(3) / 6]
        )

    def test_four_singletons_give_haar_triple(self):
        els = form_wavelets([[0], [1], [2], [3]])
        assert len(els) == 3
        mat = np.array([dense_for(e, 4) for e in els])
        np.testing.assert_allclose(mat @ mat.T, np.eye(3), atol=1e-15)
        np.testing.assert_allclose(mat.sum(axis=1), 0.0, atol=1e-15)
        np.testing.assert_allclose(mat[0], [0.5, 0.5, -0.5, -0.5])

    def test_single_component_yields_nothing(self):
        assert form_wavelets([[0, 1, 2]]) == []

    def test_overlapping_components_rejected(self):
        with pytest.raises(ValueError, match="disjoint"):
            form_wavelets([[0, 1], [1, 2]])

    def test_empty_component_rejected(self):
        with pytest.raises(ValueError):
            form_wavelets([[0], []])


class TestBuildBasis:
    def test_two_vertices_exact(self):
        b = build_basis(tree_on(2, [(0, 1)]))
        d = b.to_dense()
        r = 1 / math.sqrt(2)
        np.testing.assert_allclose(d, [[r, r], [r, -r]])

    def test_single_vertex(self):
        b = build_basis(tree_on(1, []))
        np.testing.assert_allclose(b.to_dense(), [[1.0]])

    def test_constant_element_first(self):
        rng = np.random.default_rng(0)
        t = random_tree(9, rng)
        b = build_basis(t)
        np.testing.assert_allclose(b.element(0).values, 1 / 3)
        assert b.depths[0] == 0

    def test_element_count_equals_n(self):
        rng = np.random.default_rng(1)
        for n in (1, 2, 3, 7, 20, 61):
            assert len(build_basis(random_tree(n, rng))) == n

    def test_orthonormal_on_random_trees(self):
        rng = np.random.default_rng(2)
        for n in (2, 3, 5, 17, 40, 83):
            b = build_basis(random_tree(n, rng))
            d = b.to_dense()
            assert np.abs(d @ d.T - np.eye(n)).max() < 1e-10

    def test_energy_preserved_and_invertible(self):
        rng = np.random.default_rng(3)
        for n in (2, 9, 33):
            b = build_basis(random_tree(n, rng))
            x = rng.standard_normal(n)
            c = apply_basis(b, x)
            assert abs(c @ c - x @ x) <= 1e-8 * (x @ x)
            np.testing.assert_allclose(b.to_dense().T @ c, x, atol=1e-10)

    def test_constant_signal_hits_only_first_element(self):
        rng = np.random.default_rng(4)
        t = random_tree(12, rng)
        c = apply_basis(build_basis(t), np.full(12, 2.5))
        np.testing.assert_allclose(c[0], 2.5 * math.sqrt(12))
        np.testing.assert_allclose(c[1:], 0.0, atol=1e-12)

    def test_deterministic_for_fixed_tree(self):
        t = tree_on(7, [(0, 1), (0, 2), (2, 3), (2, 4), (4, 5), (5, 6)])
        d1 = build_basis(t).to_dense()
        d2 = build_basis(t).to_dense()
        np.testing.assert_array_equal(d1, d2)


class TestSparsityBound:
    def test_mean_zero_indicator_sweep(self):
        # For mean-zero signals the coefficient count never exceeds the
        # graph cut times the per-edge budget.
        rng = np.random.default_rng(5)
        for _ in range(150):
            n = int(rng.integers(2, 50))
            t = random_tree(n, rng)
            b = build_basis(t)
            x = (rng.random(n) < rng.uniform(0.2, 0.8)).astype(float)
            x -= x.mean()
            if np.abs(x).max() < 1e-9:
                continue
            budget = tree_cut_size(t, x) * activation_bound(t)
            assert basis_sparsity(b, x) <= budget

    def test_general_signal_adds_one(self):
        rng = np.random.default_rng(6)
        for _ in range(150):
            n = int(rng.integers(2, 50))
            t = random_tree(n, rng)
            b = build_basis(t)
            x = (rng.random(n) < 0.5).astype(float)
            budget = tree_cut_size(t, x) * activation_bound(t) + 1
            assert basis_sparsity(b, x) <= budget

    def test_graph_cut_dominates_tree_cut(self):
        rng = np.random.default_rng(7)
        g = gen_torus(4, 2)
        for seed in range(30):
            t = sample_ust(g, seed)
            b = build_basis(t)
            x = (rng.random(16) < 0.5).astype(float)
            x -= x.mean()
            if np.abs(x).max() < 1e-9:
                continue
            assert basis_sparsity(b, x) <= cut_size(g, x) * activation_bound(t)


class TestActivations:
    def test_bound_values(self):
        # max(1, ceil(log2 d)) * max(1, ceil(log2 n))
        assert activation_bound(tree_on(2, [(0, 1)])) == 1
        path8 = tree_on(8, [(i, i + 1) for i in range(7)])
        assert activation_bound(path8) == 3
        star5 = tree_on(5, [(0, i) for i in range(1, 5)])
        assert activation_bound(star5) == 6

    def test_single_vertex_zero(self):
        assert activation_bound(tree_on(1, [])) == 0

    def test_edge_activations_within_bound(self):
        rng = np.random.default_rng(8)
        for _ in range(60):
            n = int(rng.integers(2, 60))
            t = random_tree(n, rng)
            acts = edge_activations(build_basis(t), t)
            assert acts.shape == (n - 1,)
            assert acts.max() <= activation_bound(t)

    def test_path_eight_hits_budget_exactly(self):
        t = tree_on(8, [(i, i + 1) for i in range(7)])
        acts = edge_activations(build_basis(t), t)
        assert int(acts.max()) == 3 == activation_bound(t)

    def test_balanced_binary_fifteen(self):
        # Root 0, vertex i has children 2i+1 and 2i+2; degree 3, n = 15.
        edges = [(i, 2 * i + 1) for i in range(7)] + [(i, 2 * i + 2) for i in range(7)]
        t = tree_on(15, edges)
        assert activation_bound(t) == 8
        acts = edge_activations(build_basis(t), t)
        assert int(acts.max()) <= 8

    def test_star_engagements(self):
        t = tree_on(5, [(0, i) for i in range(1, 5)])
        acts = edge_activations(build_basis(t), t)
        assert int(acts.max()) <= activation_bound(t)

    def test_value_difference_count_is_not_the_bounded_quantity(self):
        # Counting elements whose values merely differ across an edge also
        # picks up support boundaries, and that count is allowed to exceed
        # the budget: on the 8-path it reaches 5, while the engagement
        # count tops out at the budget of 3.
        t = tree_on(8, [(i, i + 1) for i in range(7)])
        dense = build_basis(t).to_dense()
        ea = np.array(t.edges)
        diffs = dense[:, ea[:, 0]] - dense[:, ea[:, 1]]
        value_diff_count = (np.abs(diffs) > 1e-9).sum(axis=0).max()
        assert value_diff_count == 5 > activation_bound(t)

    def test_two_vertex_edge_activated_once(self):
        t = tree_on(2, [(0, 1)])
        acts = edge_activations(build_basis(t), t)
        assert acts.tolist() == [1]

    def test_mismatched_tree_rejected(self):
        t1 = tree_on(4, [(0, 1), (1, 2), (2, 3)])
        t2 = tree_on(4, [(0, 1), (0, 2), (0, 3)])
        with pytest.raises(ValueError):
            edge_activations(build_basis(t1), t2)


class TestBasisCsv:
    def test_file_reconstructs_matrix(self, tmp_path):
        t = tree_on(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
        b = build_basis(t)
        path = tmp_path / "basis.csv"
        write_basis_csv(b, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "element,vertex,value,depth"
        got = np.zeros((5, 5))
        for line in lines[1:]:
            e, v, val, _ = line.split(",")
            got[int(e), int(v)] = float(val)
        np.testing.assert_array_equal(got, b.to_dense())
