import itertools

import pytest
from hypothesis import given, settings, strategies as stst

from twinwidth.errors import (
    BadEndpoint,
    BadVertexSet,
    DeadVertex,
    DuplicateEdge,
    IllegalRecolor,
    SameVertex,
    SelfLoop,
)
from twinwidth.trigraph import EdgeColor, new_trigraph

from conftest import all_trigraphs, contract_oracle, make_fig2, FIG2_PAIRS


def trigraphs(max_n=7):
    @stst.composite
    def build(draw):
        n = draw(stst.integers(min_value=2, max_value=max_n))
        pairs = list(itertools.combinations(range(n), 2))
        colors = draw(
            stst.lists(
                stst.sampled_from((0, 0, 1, 1, 2)),
                min_size=len(pairs),
                max_size=len(pairs),
            )
        )
        blacks = [pairs[i] for i in range(len(pairs)) if colors[i] == 1]
        reds = [pairs[i] for i in range(len(pairs)) if colors[i] == 2]
        return new_trigraph(n, blacks, reds)

    return build()


class TestConstruction:
    def test_single_vertex(self):
        g = new_trigraph(1)
        assert g.n == 1 and g.edge_count() == 0

    def test_fig2(self):
        g = make_fig2()
        assert g.n == 6
        assert g.black_edge_count() == 8
        assert not g.has_red()

    def test_duplicate_edge_rejected(self):
        with pytest.raises(DuplicateEdge):
            new_trigraph(2, [(0, 1)], [(0, 1)])
        with pytest.raises(DuplicateEdge):
            new_trigraph(3, [(0, 1), (1, 0)])

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoop):
            new_trigraph(2, [(1, 1)])

    def test_bad_endpoint_rejected(self):
        with pytest.raises(BadEndpoint):
            new_trigraph(2, [(0, 2)])


class TestContract:
    def test_fig2_first_step(self):
        g = make_fig2()
        g1 = g.contract(4, 5)  # E, F
        assert g1.black_neighbors(6) == frozenset((2,))
        assert g1.red_neighbors(6) == frozenset((3,))
        assert g1.red_degree(3) == 1
        # all other edges unchanged
        assert g1.black_neighbors(0) == frozenset((1, 2))

    def test_fig2_red_degrees_build_up(self):
        g = make_fig2().contract(4, 5).contract(0, 1).contract(2, 3)
        assert g.red_degree(8) == 2  # the C,D descendant sees AB and EF red
        assert g.max_red_degree() == 2
        isolated = new_trigraph(1)
        assert isolated.red_degree(0) == 0

    def test_true_twins_in_k4(self):
        k4 = new_trigraph(4, list(itertools.combinations(range(4), 2)))
        g = k4.contract(0, 1)
        assert not g.has_red()
        assert g.n == 3 and g.black_edge_count() == 3

    def test_p3_endpoints(self):
        # the endpoints are twins (both see only the middle, black), so the
        # merged vertex keeps a black edge; frozen from contract_oracle
        p3 = new_trigraph(3, [(0, 1), (1, 2)])
        g = p3.contract(0, 2)
        assert g == contract_oracle(p3, 0, 2)
        assert g.black_neighbors(3) == frozenset((1,))
        assert g.red_degree(3) == 0

    def test_errors(self):
        g = make_fig2()
        with pytest.raises(SameVertex):
            g.contract(1, 1)
        with pytest.raises(DeadVertex):
            g.contract(0, 9)
        g2 = g.contract(0, 1)
        with pytest.raises(DeadVertex):
            g2.contract(0, 2)

    def test_fresh_labels_never_reused(self):
        g = make_fig2()
        for a, b in FIG2_PAIRS:
            w = g.next_label
            g = g.contract(a, b)
            assert w in g.vertices
        assert g.n == 1

    def test_exhaustive_small_oracle(self):
        # every trigraph on up to 4 vertices, every pair
        for n in (2, 3, 4):
            for g in all_trigraphs(n):
                for u in range(n):
                    for v in range(u + 1, n):
                        got = g.contract(u, v)
                        assert got == contract_oracle(g, u, v)
                        got.validate()

    @settings(max_examples=300, derandomize=True)
    @given(trigraphs(max_n=7), stst.data())
    def test_contract_matches_oracle(self, g, data):
        verts = sorted(g.vertices)
        u = data.draw(stst.sampled_from(verts))
        v = data.draw(stst.sampled_from([x for x in verts if x != u]))
        got = g.contract(u, v)
        assert got == contract_oracle(g, u, v)
        got.validate()

    @settings(max_examples=200, derandomize=True)
    @given(trigraphs(max_n=7), stst.data())
    def test_disjoint_contractions_commute(self, g, data):
        from twinwidth.solver import canonical_key

        verts = sorted(g.vertices)
        if len(verts) < 4:
            return
        u, v, x, y = data.draw(
            stst.permutations(verts).map(lambda p: p[:4])
        )
        a = g.contract(u, v).contract(x, y)
        b = g.contract(x, y).contract(u, v)
        assert canonical_key(a) == canonical_key(b)

    @settings(max_examples=200, derandomize=True)
    @given(trigraphs(max_n=7), stst.data())
    def test_twin_contraction_stays_black(self, g, data):
        verts = sorted(g.vertices)
        u = data.draw(stst.sampled_from(verts))
        v = data.draw(stst.sampled_from([x for x in verts if x != u]))
        if g.red_degree(u) or g.red_degree(v):
            return
        if g.black_neighbors(u) - {v} != g.black_neighbors(v) - {u}:
            return
        got = g.contract(u, v)
        assert got.red_degree(g.next_label) == 0
        assert got.red_edge_count() <= g.red_edge_count()


class TestInduceRecolor:
    def test_induce_identity(self):
        g = make_fig2()
        assert g.induce(g.vertices) == g

    def test_induce_triangle(self):
        g = make_fig2()
        t = g.induce({0, 1, 2})
        assert t.black_edges() == [(0, 1), (0, 2), (1, 2)]
        assert t.n == 3

    def test_induce_bad_subset(self):
        with pytest.raises(BadVertexSet):
            make_fig2().induce({0, 99})

    def test_recolor_pseudoinduced(self):
        g = new_trigraph(3, [(0, 1)], [(1, 2)])
        h = g.recolor({(1, 2): EdgeColor.BLACK})
        assert h.color(1, 2) is EdgeColor.BLACK
        assert h.is_pseudoinduced_of(g)
        dropped = g.recolor({(1, 2): None})
        assert dropped.color(1, 2) is None
        assert dropped.is_pseudoinduced_of(g)

    def test_recolor_checked_rejects_black_to_red(self):
        g = new_trigraph(2, [(0, 1)])
        with pytest.raises(IllegalRecolor):
            g.recolor({(0, 1): EdgeColor.RED})
        h = g.recolor({(0, 1): EdgeColor.RED}, unchecked=True)
        assert h.color(0, 1) is EdgeColor.RED

    def test_max_red_degree_empty(self):
        assert new_trigraph(1).max_red_degree() == 0
        assert new_trigraph(0).max_red_degree() == 0
