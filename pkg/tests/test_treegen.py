import pytest

from diagalg.errors import FiniteFieldUnsupported, TruncationTooSmall, VerifyFailed
from diagalg.fields import GF, QQ
from diagalg.linalg import Matrix, Subspace
from diagalg import treegen
from diagalg.treegen import TreeDecomposition

from oracles import sympy_rank


class TestBuild:
    def test_depth_zero_base_case(self):
        d = treegen.build(0, 8)
        assert d.nodes[""] == Subspace.full(QQ, 8)
        assert list(d.w) == [1] + [0] * 7
        assert treegen.verify(d).ok

    def test_depth_one(self):
        d = treegen.build(1, 8)
        assert treegen.verify(d).ok
        assert d.nodes["0"].dim >= 3 and d.nodes["1"].dim >= 3
        assert d.nodes["0"].dim + d.nodes["1"].dim == 8

    def test_depth_two_node_count(self):
        d = treegen.build(2, 16)
        assert len(d.nodes) == 7  # 1 + 2 + 4

    def test_preconditions(self):
        with pytest.raises(TruncationTooSmall):
            treegen.build(2, 8)
        with pytest.raises(FiniteFieldUnsupported):
            treegen.build(1, 8, field=GF(5))

    def test_determinism_and_seeds(self):
        from diagalg.textio import format_tree
        a = treegen.build(2, 16)
        b = treegen.build(2, 16)
        assert format_tree(a) == format_tree(b)
        s1 = treegen.build(2, 16, seed=5)
        s2 = treegen.build(2, 16, seed=5)
        assert format_tree(s1) == format_tree(s2)
        assert treegen.verify(s1).ok
        for seed in range(4):
            assert treegen.verify(treegen.build(2, 16, seed=seed)).ok

    def test_window_disjointness_explicit(self):
        d = treegen.build(3, 32)
        for m in range(1, 4):
            span = Subspace.from_vectors(
                QQ, 32, [[1 if i == k else 0 for i in range(32)] for k in range(m)])
            for name in treegen._strings(m):
                assert span.intersection(d.nodes[name]).is_zero()


class TestVerify:
    def test_tamper_child_equals_parent(self):
        d = treegen.build(2, 16)
        nodes = dict(d.nodes)
        nodes["00"] = nodes["0"]
        bad = TreeDecomposition(QQ, 2, 16, nodes, d.w)
        rep = treegen.verify(bad)
        assert not rep.ok and rep.clause == "b"

    def test_tamper_witness_in_single_leaf(self):
        d = treegen.build(2, 16)
        w_bad = list(d.nodes["00"].rows[0])
        bad = TreeDecomposition(QQ, 2, 16, dict(d.nodes), w_bad)
        rep = treegen.verify(bad)
        assert not rep.ok and rep.clause == "d"

    def test_tamper_root(self):
        d = treegen.build(1, 8)
        nodes = dict(d.nodes)
        nodes[""] = nodes["0"]
        rep = treegen.verify(TreeDecomposition(QQ, 1, 8, nodes, d.w))
        assert not rep.ok and rep.clause in ("root", "b")

    def test_dimension_floor(self):
        for n, M in [(1, 8), (2, 16), (3, 32)]:
            d = treegen.build(n, M)
            for name, V in d.nodes.items():
                assert V.dim >= M // (2 ** len(name)) - len(name)


class TestIdempotentFamily:
    def test_level_zero_is_window_identity(self):
        d = treegen.build(1, 8)
        ops = treegen.idempotent_family(d, 0)
        from diagalg.operators import Operator
        assert len(ops) == 1
        assert ops[0] == Operator.from_matrix(QQ, Matrix.identity(QQ, 8))

    def test_level_one_complementary(self):
        d = treegen.build(1, 8)
        ops = treegen.idempotent_family(d, 1)
        assert len(ops) == 2
        total = ops[0] + ops[1]
        from diagalg.operators import Operator
        assert total == Operator.from_matrix(QQ, Matrix.identity(QQ, 8))
        assert (ops[0] * ops[1]).is_zero()

    def test_refinement_identity(self):
        d = treegen.build(2, 16)
        level1 = treegen.idempotent_family(d, 1, check_refinement=False)
        level2 = treegen.idempotent_family(d, 2, check_refinement=False)
        labels1 = treegen.level_labels(d, 1)
        labels2 = treegen.level_labels(d, 2)
        by_label = dict(zip(labels2, level2))
        for label, op in zip(labels1, level1):
            assert op == by_label[label + "0"] + by_label[label + "1"]

    def test_projection_ranges(self):
        d = treegen.build(1, 8)
        ops = treegen.idempotent_family(d, 1)
        from diagalg.operators import FiniteVector
        for name, op in zip(treegen.level_labels(d, 1), ops):
            for row in d.nodes[name].rows:
                v = FiniteVector(QQ, dict(enumerate(row)))
                assert op.apply(v) == v


class TestNoCommonEigenvector:
    def test_level_zero_counterexample(self):
        d = treegen.build(1, 8)
        rep = treegen.no_common_eigenvector(d, 0)
        assert not rep.confirmed and rep.vector is not None

    def test_confirmed_at_positive_levels(self):
        for n, M in [(1, 8), (2, 16)]:
            d = treegen.build(n, M)
            for m in range(1, n + 1):
                assert treegen.no_common_eigenvector(d, m).confirmed

    def test_confirmed_under_seeds(self):
        for seed in range(3):
            d = treegen.build(2, 16, seed=seed)
            assert treegen.no_common_eigenvector(d, 2).confirmed


class TestDiscreteness:
    def test_rank_matches_leaf_count(self):
        for n, M in [(1, 8), (2, 16)]:
            d = treegen.build(n, M)
            rep = treegen.discreteness_witness(d)
            assert rep.injective and rep.rank == 2 ** n
            comps = d.leaf_components()
            cols = [comps[leaf] for leaf in treegen._strings(n)]
            assert sympy_rank([list(col) for col in zip(*cols)]) == 2 ** n

    def test_killer_idempotent(self):
        d = treegen.build(2, 16)
        rep = treegen.discreteness_witness(d)
        E = rep.killer
        assert E * E == E
        assert E.matvec(list(d.w)) == [QQ.zero] * 16
        assert E.rank() == 15

    def test_tampered_witness_not_injective(self):
        d = treegen.build(2, 16)
        w_bad = list(d.nodes["01"].rows[0])  # lives in one leaf only
        bad = TreeDecomposition(QQ, 2, 16, dict(d.nodes), w_bad)
        rep = treegen.discreteness_witness(bad)
        assert not rep.injective and rep.rank < 4

    def test_depth_zero_rejected(self):
        with pytest.raises(ValueError):
            treegen.discreteness_witness(treegen.build(0, 8))


class TestSerialization:
    def test_round_trip(self):
        from diagalg.textio import format_tree, parse_tree
        d = treegen.build(2, 16)
        text = format_tree(d)
        d2 = parse_tree(text)
        assert d2.nodes == d.nodes and tuple(d2.w) == d.w
        assert format_tree(d2) == text

    def test_verify_on_load(self):
        from diagalg.errors import ParseError
        from diagalg.textio import format_tree, parse_tree
        d = treegen.build(1, 8)
        nodes = dict(d.nodes)
        nodes["0"] = nodes["1"]
        bad = TreeDecomposition(QQ, 1, 8, nodes, d.w)
        with pytest.raises(ParseError):
            parse_tree(format_tree(bad))
