"""Seed-tree heuristic: shortest-path trees, perturbation, union subgraph."""

import random

import pytest

from steinerenum import (
    Graph,
    GraphError,
    SeedConfig,
    brute_force_minimal_steiner,
    select_seeds,
    tosp_tree,
    union_subgraph,
    validate_tree,
)
from steinerenum.seeds import default_root, minimalize
from .conftest import random_connected_graph


class TestTosp:
    def test_triangle_prefers_cheap_path(self, triangle):
        t = tosp_tree(triangle)
        assert t.edges == frozenset({0, 1})
        assert t.cost == 2

    def test_valid_on_random_graphs(self):
        rng = random.Random(3)
        for _ in range(60):
            g = random_connected_graph(rng)
            t = tosp_tree(g)
            assert validate_tree(t, g)
            assert g.tree_cost(t.edges) == t.cost
            optimum = brute_force_minimal_steiner(g)[0].cost
            assert t.cost >= optimum

    def test_banned_edges_avoided(self, triangle):
        t = tosp_tree(triangle, banned=frozenset({0}))
        assert t.edges == frozenset({2})

    def test_root_must_be_terminal(self, triangle):
        with pytest.raises(GraphError):
            tosp_tree(triangle, root=2)

    def test_unreachable_terminal_raises(self, triangle):
        with pytest.raises(GraphError, match="unreachable"):
            tosp_tree(triangle, banned=frozenset({0, 2}))

    def test_deterministic(self):
        rng = random.Random(17)
        for _ in range(20):
            g = random_connected_graph(rng)
            assert tosp_tree(g).edges == tosp_tree(g).edges

    def test_default_root_min_degree(self):
        g = Graph(
            4, ((1, 2, 1), (1, 3, 1), (2, 3, 1), (3, 4, 1)), frozenset({1, 4})
        )
        assert default_root(g) == 4


class TestMinimalize:
    def test_strips_dangling_chain(self):
        g = Graph(4, ((1, 2, 1), (2, 3, 1), (3, 4, 1)), frozenset({1, 3}))
        assert minimalize({0, 1, 2}, g) == {0, 1}

    def test_keeps_minimal_tree(self, square):
        assert minimalize({0, 1}, square) == {0, 1}


class TestSelectSeeds:
    def test_single_seed_no_perturbation(self, triangle):
        sel = select_seeds(triangle, SeedConfig(num_seeds=1))
        assert len(sel.seed_trees) == 1
        assert sel.seed_trees[0].edges == frozenset({0, 1})
        assert sel.requested == 1

    def test_zero_perturbation_skips_reruns(self, triangle):
        sel = select_seeds(
            triangle, SeedConfig(num_seeds=5, perturb_fraction=0.0)
        )
        assert len(sel.seed_trees) == 1
        assert sel.requested == 5

    def test_seeds_are_valid_and_distinct(self):
        rng = random.Random(23)
        for _ in range(25):
            g = random_connected_graph(rng, max_vertices=8, max_edges=14)
            sel = select_seeds(g, SeedConfig(num_seeds=4, perturb_fraction=0.2))
            seen = set()
            for t in sel.seed_trees:
                assert validate_tree(t, g)
                assert t.edges not in seen
                seen.add(t.edges)

    def test_union_subgraph_structure(self):
        rng = random.Random(29)
        g = random_connected_graph(rng, max_vertices=8, max_edges=14)
        sel = select_seeds(g, SeedConfig(num_seeds=3, perturb_fraction=0.2))
        union = set()
        for t in sel.seed_trees:
            union |= t.edges
        assert set(sel.edge_map) == union
        assert list(sel.edge_map) == sorted(sel.edge_map)
        for j, parent_idx in enumerate(sel.edge_map):
            assert sel.graph.edges[j] == g.edges[parent_idx]
        assert sel.graph.terminals == g.terminals
        assert sel.graph.vertex_count == g.vertex_count

    def test_same_seed_reproduces(self):
        rng = random.Random(41)
        g = random_connected_graph(rng, max_vertices=8, max_edges=14)
        cfg = SeedConfig(num_seeds=4, perturb_fraction=0.3, rng_seed=9)
        a = select_seeds(g, cfg)
        b = select_seeds(g, cfg)
        assert [t.edges for t in a.seed_trees] == [t.edges for t in b.seed_trees]
        assert a.edge_map == b.edge_map

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SeedConfig(num_seeds=0)
        with pytest.raises(ValueError):
            SeedConfig(perturb_fraction=1.0)
        with pytest.raises(ValueError):
            SeedConfig(perturb_fraction=-0.1)


class TestUnionSubgraph:
    def test_identity_when_all_edges(self, triangle):
        sub, edge_map = union_subgraph(triangle, range(3))
        assert sub.edges == triangle.edges
        assert edge_map == (0, 1, 2)

    def test_subset(self, triangle):
        sub, edge_map = union_subgraph(triangle, {2})
        assert sub.edges == ((1, 3, 3),)
        assert edge_map == (2,)
