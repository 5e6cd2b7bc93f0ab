import random

import pytest

from conftest import trace_triangle_count
from tristream.errors import ParseError, ValidationError
from tristream.generators import gen_book, gen_complete, gen_disjoint, gen_er, gen_friendship
from tristream.graphs import (
    Graph,
    exact_triangle_count,
    graph_stats,
    load_edge_list,
    materialize,
    to_edge_list_text,
    triangle_list,
)


class TestLoadEdgeList:
    def test_basic_parse(self):
        stream = load_edge_list("0 1\n1 2\n0 2\n")
        assert stream.edges == [(0, 1), (1, 2), (0, 2)]
        assert len(stream) == 3
        assert stream.dropped == 0

    def test_self_loop_strict(self):
        with pytest.raises(ValidationError) as err:
            load_edge_list("0 0\n")
        assert "line 1" in str(err.value)

    def test_comment_and_blank_skipped(self):
        stream = load_edge_list("# c\n3 4\n")
        assert stream.edges == [(3, 4)]
        assert load_edge_list("\n\n# only comments\n").edges == []

    def test_crlf_and_whitespace(self):
        stream = load_edge_list(b"5 6\r\n\t7   8\r\n")
        assert stream.edges == [(5, 6), (7, 8)]

    def test_canonicalizes_endpoint_order(self):
        assert load_edge_list("9 2\n").edges == [(2, 9)]

    def test_malformed_line_reports_number(self):
        with pytest.raises(ParseError) as err:
            load_edge_list("0 1\nnope\n")
        assert err.value.line_no == 2
        with pytest.raises(ParseError):
            load_edge_list("1 2 3\n")
        with pytest.raises(ParseError):
            load_edge_list("-1 2\n")

    def test_duplicate_strict_vs_permissive(self):
        text = "0 1\n1 0\n2 2\n0 1\n"
        with pytest.raises(ValidationError):
            load_edge_list(text)
        stream = load_edge_list(text, strict=False)
        assert stream.edges == [(0, 1)]
        assert stream.dropped == 3

    def test_u64_range(self):
        big = (1 << 64) - 1
        assert load_edge_list(f"0 {big}\n").edges == [(0, big)]
        with pytest.raises(ParseError):
            load_edge_list(f"0 {big + 1}\n")


class TestMaterialize:
    def test_small(self):
        g = materialize([(0, 1), (1, 2)])
        assert g.n == 3
        assert g.m == 2
        assert g.neighbors(1) == {0, 2}

    def test_empty(self):
        g = materialize([])
        assert g.n == 0 and g.m == 0
        assert graph_stats(g).to_json_dict() == {
            "n": 0, "m": 0, "T": 0, "delta_E": 0, "delta_V": 0, "d": 0,
        }

    def test_complete_graph_degrees(self):
        g = gen_complete(4)
        assert all(len(g.neighbors(v)) == 3 for v in g.vertices())

    def test_duplicate_rejected(self):
        with pytest.raises(ValidationError):
            materialize([(0, 1), (1, 0)])


class TestExactCount:
    def test_k4(self):
        assert exact_triangle_count(gen_complete(4)) == 4

    def test_path_triangle_free(self):
        assert exact_triangle_count(materialize([(0, 1), (1, 2)])) == 0

    def test_er_against_trace_oracle(self):
        g = gen_er(20, 60, seed=1)
        assert exact_triangle_count(g) == trace_triangle_count(g) == 40

    @pytest.mark.parametrize("graph", [
        gen_complete(6),
        gen_book(7),
        gen_friendship(5),
        gen_disjoint(4),
        gen_er(30, 120, seed=9),
        gen_er(12, 40, seed=4),
    ])
    def test_trace_oracle_family_sweep(self, graph):
        assert exact_triangle_count(graph) == trace_triangle_count(graph)


class TestGraphStats:
    def test_k5(self):
        s = graph_stats(gen_complete(5))
        assert (s.triangles, s.delta_e, s.delta_v, s.max_degree) == (10, 3, 6, 4)

    def test_friendship_f3(self):
        s = graph_stats(gen_friendship(3))
        assert (s.n, s.m, s.triangles, s.delta_e, s.delta_v, s.max_degree) == (7, 9, 3, 1, 3, 6)

    def test_book_b4(self):
        s = graph_stats(gen_book(4))
        assert (s.triangles, s.delta_e, s.delta_v, s.max_degree) == (4, 4, 4, 5)

    @pytest.mark.parametrize("graph", [
        gen_complete(5), gen_book(6), gen_friendship(4), gen_disjoint(3),
        gen_er(25, 100, seed=2),
    ])
    def test_overlap_inequalities(self, graph):
        s = graph_stats(graph)
        if s.triangles > 0:
            assert 1 <= s.delta_e <= s.delta_v <= s.triangles
        assert s.delta_e <= s.max_degree
        assert s.delta_v <= s.max_degree * (s.max_degree - 1) // 2

    def test_relabeling_invariance(self):
        g = gen_er(20, 70, seed=5)
        rng = random.Random(0)
        ids = list(range(1000, 1020))
        rng.shuffle(ids)
        mapping = dict(zip(range(20), ids))
        relabeled = Graph.from_edges(
            (mapping[u], mapping[v]) for u, v in g.edge_list())
        a, b = graph_stats(g), graph_stats(relabeled)
        assert (a.triangles, a.delta_e, a.delta_v, a.max_degree) == \
            (b.triangles, b.delta_e, b.delta_v, b.max_degree)


def test_triangle_list_matches_count():
    for graph in (gen_complete(6), gen_er(18, 70, seed=8), gen_friendship(5)):
        tris = triangle_list(graph)
        assert len(tris) == exact_triangle_count(graph)
        assert len(set(tris)) == len(tris)
        for a, b, c in tris:
            assert a < b < c
            assert graph.has_edge(a, b) and graph.has_edge(a, c) and graph.has_edge(b, c)


def test_edge_list_text_round_trip():
    g = gen_er(15, 40, seed=3)
    text = to_edge_list_text(g.edge_list())
    again = materialize(load_edge_list(text))
    assert again.edge_list() == g.edge_list()
    assert to_edge_list_text([]) == ""
