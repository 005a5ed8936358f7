import random

import pytest

from helpers import fixture_reps
from sgreps.equivalence import (ForestAssignment, InvalidForest, LabelMismatch,
                                UnreachableTarget, ZeroTarget,
                                classify_row_equivalence, cycle_basis_size,
                                fundamental_incidence, normalize_brylawski,
                                normalize_restricted, partition_report,
                                projectively_equivalent, row_equivalent,
                                rref_fingerprint, spanning_forest)
from sgreps.exactmat import DYADIC, GF3, Dyadic, ExactMatrix
from sgreps.sgsearch import SgRepresentation


def std_gf3(d_rows, labels=None):
    r = len(d_rows)
    rows = [[1 if i == j else 0 for j in range(r)] + list(d_rows[i])
            for i in range(r)]
    return ExactMatrix(GF3, rows, labels)


NONFANO_D = [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1]]


class TestFundamentalIncidence:
    def test_nonfano_pattern(self):
        fi = fundamental_incidence(std_gf3(NONFANO_D))
        assert fi.entries == ((0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1))
        assert fi.row_labels == ("e1", "e2", "e3")
        assert fi.col_labels == ("e4", "e5", "e6", "e7")

    def test_zero_d(self):
        fi = fundamental_incidence(std_gf3([[0, 0], [0, 0]]))
        assert fi.entries == ((0, 0), (0, 0))

    def test_invariant_under_scaling(self):
        a = std_gf3([[1, 2], [0, 1]])
        b = std_gf3([[2, 2], [0, 2]])
        assert fundamental_incidence(a) == fundamental_incidence(b)

    def test_requires_standard_form(self):
        with pytest.raises(ValueError):
            fundamental_incidence(ExactMatrix(GF3, [[0, 1, 1], [1, 0, 1]]))


class TestCycleBasisSize:
    def test_nonfano_is_six(self):
        assert cycle_basis_size(fundamental_incidence(std_gf3(NONFANO_D))) == 6

    def test_zero_pattern(self):
        assert cycle_basis_size(fundamental_incidence(std_gf3([[0, 0], [0, 0]]))) == 0

    def test_single_entry(self):
        assert cycle_basis_size(fundamental_incidence(std_gf3([[1, 0], [0, 0]]))) == 1


class TestSpanningForest:
    def test_nonfano_size_and_acyclic(self):
        fi = fundamental_incidence(std_gf3(NONFANO_D))
        fa = spanning_forest(fi)
        assert len(fa.edges) == 6
        seen = set()
        parent = {}

        def find(v):
            while parent.setdefault(v, v) != v:
                v = parent[v]
            return v

        for a, b in fa.edges:
            ra, rb = find(a), find(b)
            assert ra != rb
            parent[ra] = rb

    def test_empty(self):
        assert spanning_forest(fundamental_incidence(std_gf3([[0]]))).edges == ()

    def test_path_pattern_takes_all_edges(self):
        fi = fundamental_incidence(std_gf3([[1, 0], [1, 1]]))
        assert len(spanning_forest(fi).edges) == 3


class TestNormalizeBrylawski:
    def test_single_entry_rational(self):
        rep = ExactMatrix(DYADIC, [[Dyadic(1), Dyadic(2)]])
        fa = ForestAssignment((("e1", "e2"),), (Dyadic(1),))
        out = normalize_brylawski(rep, fa)
        assert out.entries[0][1] == Dyadic(1)

    def test_nonfano_all_ones_idempotent(self):
        rep = std_gf3(NONFANO_D)
        fa = spanning_forest(fundamental_incidence(rep))
        fa = fa.with_targets([1] * len(fa.edges))
        out = normalize_brylawski(rep, fa)
        for a, b in fa.edges:
            i = out.col_labels.index(a)
            j = out.col_labels.index(b)
            assert out.entries[i][j] == 1
        assert normalize_brylawski(out, fa) == out

    def test_scaling_invariance(self):
        rng = random.Random(51)
        rep = std_gf3(NONFANO_D)
        fa = spanning_forest(fundamental_incidence(rep))
        fa = fa.with_targets([1] * len(fa.edges))
        canon = normalize_brylawski(rep, fa)
        for _ in range(50):
            d = [list(row[3:]) for row in rep.entries]
            for i in range(3):
                f = rng.choice((1, 2))
                d[i] = [(f * v) % 3 for v in d[i]]
            for j in range(4):
                f = rng.choice((1, 2))
                for i in range(3):
                    d[i][j] = (f * d[i][j]) % 3
            scaled = std_gf3(d)
            assert normalize_brylawski(scaled, fa) == canon

    def test_zero_target_rejected(self):
        rep = std_gf3([[1]])
        fa = ForestAssignment((("e1", "e2"),), (0,))
        with pytest.raises(ZeroTarget):
            normalize_brylawski(rep, fa)

    def test_missing_targets_rejected(self):
        rep = std_gf3([[1]])
        with pytest.raises(ZeroTarget):
            normalize_brylawski(rep, ForestAssignment((("e1", "e2"),)))

    def test_off_support_edge_rejected(self):
        rep = std_gf3([[0, 1], [1, 1]])
        fa = ForestAssignment((("e1", "e3"),), (1,))
        with pytest.raises(InvalidForest):
            normalize_brylawski(rep, fa)

    def test_cycle_rejected(self):
        rep = std_gf3([[1, 1], [1, 1]])
        fa = ForestAssignment((("e1", "e3"), ("e1", "e4"), ("e2", "e3"),
                               ("e2", "e4")), (1, 1, 1, 1))
        with pytest.raises(InvalidForest):
            normalize_brylawski(rep, fa)


class TestNormalizeRestricted:
    def test_sign_flip_reachable(self):
        rep = ExactMatrix(DYADIC, [[Dyadic(1), Dyadic(2)]])
        fa = ForestAssignment((("e1", "e2"),), (Dyadic(-2),))
        out = normalize_restricted(rep, fa)
        assert out.entries[0][1] == Dyadic(-2)

    def test_magnitude_change_rejected(self):
        rep = ExactMatrix(DYADIC, [[Dyadic(1), Dyadic(2)]])
        fa = ForestAssignment((("e1", "e2"),), (Dyadic(1),))
        with pytest.raises(UnreachableTarget):
            normalize_restricted(rep, fa)

    def test_plus_minus_current_always_works(self):
        rng = random.Random(52)
        reps = fixture_reps("rank6_uniform")[:3]
        for rep in reps:
            from sgreps.exactmat import lift_gf3_to_dyadic, rref
            m = lift_gf3_to_dyadic(rep.matrix)
            red, piv = rref(m)
            order = list(piv) + [j for j in range(m.ncols) if j not in piv]
            std = red.submatrix_cols(order)
            fa = spanning_forest(fundamental_incidence(std))
            d_rows, row_labels, col_labels = std.entries, std.col_labels[:6], std.col_labels[6:]
            targets = []
            for a, b in fa.edges:
                i = list(row_labels).index(a)
                j = list(col_labels).index(b)
                cur = d_rows[i][6 + j]
                targets.append(cur if rng.random() < 0.5 else -cur)
            out = normalize_restricted(std, fa.with_targets(targets))
            for (a, b), t in zip(fa.edges, targets):
                i = list(row_labels).index(a)
                j = list(col_labels).index(b)
                assert out.entries[i][6 + j] == t


class TestRowEquivalence:
    def test_row_permuted_self(self):
        rep = fixture_reps("rank6_uniform")[0]
        perm = ExactMatrix(GF3, rep.matrix.entries[::-1], rep.matrix.col_labels)
        other = SgRepresentation(perm, rep.basis_labels)
        assert row_equivalent(rep, other)

    def test_uniform_fixture_pair(self):
        reps = fixture_reps("rank6_uniform")
        assert row_equivalent(reps[0], reps[1])

    def test_split_fixture_pair(self):
        reps = fixture_reps("rank5_split")
        assert not row_equivalent(reps[0], reps[1])

    def test_label_mismatch(self):
        reps = fixture_reps("rank5_split")
        relabeled = SgRepresentation(
            reps[0].matrix.with_labels([f"z{i}" for i in range(9)]),
            reps[0].basis_labels)
        with pytest.raises(LabelMismatch):
            row_equivalent(reps[0], relabeled)

    def test_equivalence_relation_properties(self):
        rng = random.Random(53)
        reps = fixture_reps("rank6_mixed")
        for _ in range(30):
            a, b, c = (rng.choice(reps) for _ in range(3))
            assert row_equivalent(a, a)
            assert row_equivalent(a, b) == row_equivalent(b, a)
            if row_equivalent(a, b) and row_equivalent(b, c):
                assert row_equivalent(a, c)

    def test_row_equivalent_implies_projectively_equivalent(self):
        reps = fixture_reps("rank6_mixed")
        std = [_standardize(r) for r in reps]
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                if row_equivalent(reps[i], reps[j]):
                    assert projectively_equivalent(std[i], std[j])


def _standardize(rep):
    from sgreps.exactmat import lift_gf3_to_dyadic, rref
    m = lift_gf3_to_dyadic(rep.matrix)
    red, piv = rref(m)
    order = list(piv) + [j for j in range(m.ncols) if j not in piv]
    return red.submatrix_cols(order)


class TestClassify:
    def test_mixed_fixture_partition(self):
        reps = fixture_reps("rank6_mixed")
        classes = classify_row_equivalence(reps)
        assert sorted(len(c) for c in classes) == [1, 1, 9]
        # the two specials are the last two fixture blocks
        singles = sorted(i for c in classes if len(c) == 1 for i in c)
        assert singles == [9, 10]

    def test_uniform_fixture_partition(self):
        classes = classify_row_equivalence(fixture_reps("rank6_uniform"))
        assert [len(c) for c in classes] == [15]

    def test_split_fixture_partition(self):
        classes = classify_row_equivalence(fixture_reps("rank5_split"))
        assert sorted(len(c) for c in classes) == [1, 1, 1]

    def test_gf3_variant_merges_specials(self):
        reps = fixture_reps("rank6_mixed")
        classes = classify_row_equivalence(reps, field="gf3")
        assert sorted(len(c) for c in classes) == [11]

    def test_report_mentions_sizes(self):
        reps = fixture_reps("rank5_split")
        report = partition_report(reps)
        assert "classes 3 of 3" in report
        assert report.count("fingerprint") == 3


class TestProjectiveEquivalence:
    def test_scaled_copy(self):
        rng = random.Random(54)
        rep = std_gf3(NONFANO_D)
        d = [list(row[3:]) for row in rep.entries]
        for i in range(3):
            f = rng.choice((1, 2))
            d[i] = [(f * v) % 3 for v in d[i]]
        for j in range(4):
            f = rng.choice((1, 2))
            for i in range(3):
                d[i][j] = (f * d[i][j]) % 3
        assert projectively_equivalent(rep, std_gf3(d))

    def test_different_support_false(self):
        assert not projectively_equivalent(std_gf3([[1, 1]]), std_gf3([[1, 0]]))

    def test_specials_regression(self):
        # the two non-row-equivalent rank-6 representations are related by
        # row operations plus column scaling over the rationals
        reps = fixture_reps("rank6_mixed")
        s10 = _standardize(reps[9])
        s11 = _standardize(reps[10])
        assert not row_equivalent(reps[9], reps[10])
        assert projectively_equivalent(s10, s11)
