import random

import pytest

from sgreps.exactmat import GF3, ExactMatrix
from sgreps.matroid import LinearMatroid, SubsetFamily
from sgreps.siggraph import (CylinderSplit, Edge, InvalidSplit, LabelMismatch,
                             SignedGraph, TooManyNonzeros, cylinder_flip,
                             from_representation, verify_flip)
from sgreps.verify import lemma_cylinder_instance, random_signed_graph


def graph(edge_specs, vertices=None):
    """edge_specs: (u, v, sign, label) tuples."""
    edges = [Edge(u, v, s, lab) for u, v, s, lab in edge_specs]
    if vertices is None:
        vertices = {w for e in edges for w in (e.u, e.v)}
    return SignedGraph(vertices, edges)


def linear_circuits(g):
    return LinearMatroid(g.incidence_matrix()).circuits()


class TestIncidence:
    def test_positive_edge_column(self):
        g = graph([("v1", "v2", 1, "e1")])
        assert g.incidence_matrix().column(0) == (1, 2)

    def test_negative_loop_single_minus_one(self):
        g = graph([("v1", "v1", -1, "e1")])
        assert g.incidence_matrix().column(0) == (2,)

    def test_positive_loop_zero_column(self):
        g = graph([("v1", "v1", 1, "e1")])
        assert g.incidence_matrix().column(0) == (0,)

    def test_negative_edge_equal_entries(self):
        g = graph([("v1", "v2", -1, "e1")])
        assert g.incidence_matrix().column(0) == (1, 1)


class TestFromRepresentation:
    def test_basis_columns_become_loops(self):
        a = ExactMatrix(GF3, [[], []], ())
        g = from_representation(a, ("b1", "b2"))
        assert len(g.edges) == 2
        assert all(e.is_loop and e.sign < 0 for e in g.edges)

    def test_two_equal_entries_negative_edge(self):
        a = ExactMatrix(GF3, [[1], [1]], ("e1",))
        g = from_representation(a)
        assert g.edge("e1").sign == -1

    def test_rejects_dense_column(self):
        a = ExactMatrix(GF3, [[1], [1], [1]], ("e1",))
        with pytest.raises(TooManyNonzeros):
            from_representation(a)

    def test_round_trip_exact(self):
        rng = random.Random(31)
        for _ in range(60):
            g = random_signed_graph(rng, max_vertices=6, max_edges=8)
            inc = g.incidence_matrix()
            back = from_representation(inc)
            assert back.incidence_matrix().entries == inc.entries

    def test_round_trip_identity_on_canonical_names(self):
        rng = random.Random(32)
        for _ in range(40):
            g = random_signed_graph(rng, max_vertices=5, max_edges=7)
            if any(e.is_loop and e.sign > 0 for e in g.edges):
                continue
            back = from_representation(g.incidence_matrix())
            assert back == g


class TestCircuits:
    def test_two_negative_loops_one_vertex(self):
        g = graph([("v1", "v1", -1, "e1"), ("v1", "v1", -1, "e2")])
        assert g.circuits_sg() == SubsetFamily([{"e1", "e2"}])

    def test_negative_cycle_is_independent(self):
        g = graph([("v1", "v2", 1, "e1"), ("v2", "v3", 1, "e2"),
                   ("v1", "v3", -1, "e3")])
        assert len(g.circuits_sg()) == 0

    def test_two_negative_edges_parallel(self):
        g = graph([("v1", "v2", -1, "e1"), ("v1", "v2", -1, "e2")])
        assert g.circuits_sg() == SubsetFamily([{"e1", "e2"}])

    def test_positive_loop_is_a_circuit(self):
        g = graph([("v1", "v1", 1, "e1")])
        assert g.circuits_sg() == SubsetFamily([{"e1"}])

    def test_loose_handcuff(self):
        g = graph([("v1", "v1", -1, "e1"), ("v2", "v2", -1, "e2"),
                   ("v1", "v2", 1, "e3")])
        assert g.circuits_sg() == SubsetFamily([{"e1", "e2", "e3"}])

    def test_matches_linear_matroid_on_randoms(self):
        rng = random.Random(33)
        for _ in range(60):
            g = random_signed_graph(rng, max_vertices=6, max_edges=9)
            assert g.circuits_sg() == linear_circuits(g)


class TestBalanceAndBlocking:
    def test_all_positive_balanced(self):
        g = graph([("v1", "v2", 1, "e1"), ("v2", "v3", 1, "e2")])
        assert g.is_balanced()
        assert g.is_blocking_pair("v1", "v3")

    def test_negative_loop_unbalanced(self):
        g = graph([("v1", "v1", -1, "e1"), ("v1", "v2", 1, "e2")])
        assert not g.is_balanced()
        assert g.is_blocking_pair("v1", "v2")
        assert g.is_blocking_pair("v1", "v1")
        assert not g.is_blocking_pair("v2", "v2")

    def test_balancing_set_makes_positive(self):
        rng = random.Random(34)
        done = 0
        while done < 20:
            g = random_signed_graph(rng, max_vertices=6, max_edges=8, loops=False)
            s = g.balancing_set()
            if s is None:
                continue
            done += 1
            assert all(e.sign > 0 for e in g.resign(s).edges)


class TestResign:
    def test_involution(self):
        rng = random.Random(35)
        for _ in range(30):
            g = random_signed_graph(rng, max_vertices=6, max_edges=8)
            s = {v for v in g.vertices if rng.random() < 0.5}
            assert g.resign(s).resign(s) == g

    def test_path_example(self):
        g = graph([("u", "v", -1, "e1"), ("v", "w", 1, "e2")])
        out = g.resign({"v"})
        assert out.edge("e1").sign == 1
        assert out.edge("e2").sign == -1

    def test_equals_row_negation(self):
        rng = random.Random(36)
        for _ in range(40):
            g = random_signed_graph(rng, max_vertices=6, max_edges=8)
            s = {v for v in g.vertices if rng.random() < 0.5}
            inc = g.incidence_matrix()
            rows = []
            for i, v in enumerate(g.vertices):
                row = inc.entries[i]
                rows.append(tuple((-x) % 3 for x in row) if v in s else row)
            assert g.resign(s).incidence_matrix().entries == tuple(rows)

    def test_circuits_invariant(self):
        rng = random.Random(37)
        for _ in range(40):
            g = random_signed_graph(rng, max_vertices=6, max_edges=8)
            s = {v for v in g.vertices if rng.random() < 0.5}
            assert g.resign(s).circuits_sg() == g.circuits_sg()


class TestCylinderFlip:
    def test_lemma_instance_crosses_connectors(self):
        rng = random.Random(38)
        g, split = lemma_cylinder_instance(rng)
        flipped = cylinder_flip(g, split)
        assert verify_flip(g, flipped)

    def test_degenerate_instance(self):
        rng = random.Random(39)
        g, split = lemma_cylinder_instance(rng, degenerate=True)
        assert split.s1 == split.t1
        flipped = cylinder_flip(g, split)
        assert verify_flip(g, flipped)

    def test_double_flip_preserves_circuits(self):
        rng = random.Random(40)
        g, split = lemma_cylinder_instance(rng)
        twice = cylinder_flip(cylinder_flip(g, split), split)
        assert verify_flip(g, twice)

    def test_invalid_pair_rejected(self):
        # one negative cycle avoiding both claimed blocking vertices
        g = graph([("v1", "v2", -1, "e1"), ("v1", "v2", 1, "e2"),
                   ("v3", "v4", 1, "e3")])
        split = CylinderSplit("v3", "v4", "v3", "v4", frozenset({"e3"}))
        with pytest.raises(InvalidSplit):
            cylinder_flip(g, split)

    def test_shared_noncut_vertex_rejected(self):
        g = graph([("v1", "v2", 1, "e1"), ("v1", "v2", 1, "e2")])
        split = CylinderSplit("v1", "v1", "v1", "v1", frozenset({"e2"}))
        with pytest.raises(InvalidSplit):
            cylinder_flip(g, split)

    def test_verify_flip_label_mismatch(self):
        a = graph([("v1", "v2", 1, "e1")])
        b = graph([("v1", "v2", 1, "e9")])
        with pytest.raises(LabelMismatch):
            verify_flip(a, b)

    def test_verify_flip_detects_change(self):
        # flipping one sign on a positive triangle changes the circuits
        a = graph([("v1", "v2", 1, "e1"), ("v2", "v3", 1, "e2"),
                   ("v1", "v3", 1, "e3")])
        b = graph([("v1", "v2", -1, "e1"), ("v2", "v3", 1, "e2"),
                   ("v1", "v3", 1, "e3")])
        assert not verify_flip(a, b)


class TestSerialization:
    def test_text_round_trip(self):
        rng = random.Random(41)
        for _ in range(30):
            g = random_signed_graph(rng, max_vertices=6, max_edges=8)
            assert SignedGraph.from_text(g.to_text()) == g

    def test_dot_styles_negative_dashed(self):
        g = graph([("v1", "v2", -1, "e1"), ("v2", "v3", 1, "e2")])
        dot = g.to_dot()
        assert 'style=dashed' in dot and 'style=solid' in dot

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            SignedGraph.from_text("nope\n")
