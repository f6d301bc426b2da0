from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from balansol.graph import (
    Edge,
    EdgeClass,
    GraphFormatError,
    Orientation,
    WeightedMultigraph,
    canonical_edge_list,
    classify,
    fingerprint,
    format_fraction,
    format_graph,
    loads,
    makespan,
    parse_fraction,
    parse_graph,
    relabel,
    scale_weights,
    weighted_in_degree,
)

F = Fraction


@st.composite
def graphs(draw, max_n=5, max_m=7):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    edges = [
        (draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1)),
         F(draw(st.integers(1, 12)), draw(st.integers(1, 6))))
        for _ in range(m)
    ]
    return WeightedMultigraph.from_edges(n, edges)


@st.composite
def graph_and_orientation(draw):
    g = draw(graphs())
    t = tuple(draw(st.sampled_from(g.endpoints(e))) for e in range(g.edge_count))
    return g, Orientation(t)


class TestParse:
    def test_minimal(self, i1):
        assert i1.vertex_count == 2
        assert i1.edge_count == 1
        assert i1.weight(0) == 1

    def test_parallel(self, i2):
        assert i2.edge_count == 3
        assert all(i2.endpoints(e) == (0, 1) for e in range(3))

    def test_loop(self, loop):
        assert loop.edge_count == 1
        assert loop.is_loop(0)
        assert loop.weight(0) == F(1, 2)

    def test_decimal_is_exact(self):
        g = parse_graph("vertices 2\nedge 0 1 0.85\n")
        assert g.weight(0) == F(17, 20)

    def test_bytes_and_comments(self):
        g = parse_graph(b"# a comment\n\nvertices 3\nedge 2 0 3/4\n")
        assert g.edges[0].u == 2 and g.weight(0) == F(3, 4)

    @pytest.mark.parametrize(
        "text, line",
        [
            ("vertices 2\nedge 0 1 0\n", 2),
            ("vertices 2\nedge 0 1 -1/2\n", 2),
            ("vertices 2\nedge 0 2 1\n", 2),
            ("vertices 2\n\nedge 0 1\n", 3),
            ("edge 0 1 1\n", 1),
            ("vertices 2\nedge 0 1 x\n", 2),
            ("vertices 2\nvertices 3\n", 2),
            ("vertices 2\nnode 0\n", 2),
            ("vertices 2\nedge 0 1 1/0\n", 2),
        ],
    )
    def test_errors_carry_line_number(self, text, line):
        with pytest.raises(GraphFormatError) as exc:
            parse_graph(text)
        assert exc.value.lineno == line
        assert f"line {line}" in str(exc.value)

    def test_missing_header(self):
        with pytest.raises(GraphFormatError):
            parse_graph("# nothing\n")

    def test_roundtrip(self, big_path):
        assert parse_graph(format_graph(big_path)) == big_path


class TestModel:
    def test_rejects_float_weight(self):
        with pytest.raises(TypeError):
            WeightedMultigraph(2, (Edge(0, 1, 0.5),))

    def test_rejects_bad_endpoint(self):
        with pytest.raises(ValueError):
            WeightedMultigraph.from_edges(2, [(0, 3, 1)])

    def test_orientation_validation(self, i1):
        Orientation((1,)).validate(i1)
        with pytest.raises(ValueError):
            Orientation((5,)).validate(i1)
        with pytest.raises(ValueError):
            Orientation((0, 0)).validate(i1)

    def test_source(self, i1, loop):
        assert Orientation((1,)).source(i1, 0) == 0
        assert Orientation((0,)).source(loop, 0) == 0


class TestInDegree:
    def test_i2_all_toward_u(self, i2):
        o = Orientation((0, 0, 0))
        assert weighted_in_degree(i2, o, 0) == 3
        assert weighted_in_degree(i2, o, 1) == 0

    def test_loop_counted_once(self, loop):
        assert weighted_in_degree(loop, Orientation((0,)), 0) == F(1, 2)

    def test_big_path_v3(self, big_path):
        o = Orientation.toward_second(big_path)
        # v3 receives only the 0.85 edge; the 0.9 edge points at v4
        assert weighted_in_degree(big_path, o, 2) == F(17, 20)

    @given(graph_and_orientation())
    def test_sum_is_total_weight(self, go):
        g, o = go
        assert sum(loads(g, o), F(0)) == g.total_weight()
        assert makespan(g, o) == max(loads(g, o), default=F(0))


class TestScale:
    def test_halve_i2(self, i2):
        h = scale_weights(i2, F(1, 2))
        assert [e.weight for e in h.edges] == [F(1, 2)] * 3
        assert [(e.u, e.v) for e in h.edges] == [(e.u, e.v) for e in i2.edges]

    def test_identity(self, big_path):
        assert scale_weights(big_path, 1) == big_path

    def test_normalize(self):
        g = WeightedMultigraph.from_edges(2, [(0, 1, F(17, 20))])
        assert scale_weights(g, 1 / F(17, 20)).weight(0) == 1

    def test_nonpositive_factor(self, i1):
        with pytest.raises(ValueError):
            scale_weights(i1, 0)

    @given(graphs(), st.fractions(min_value=F(1, 100), max_value=100))
    def test_roundtrip(self, g, a):
        assert scale_weights(scale_weights(g, a), 1 / a) == g


class TestClassify:
    def test_general_thresholds(self):
        assert classify(F(1, 3)) is EdgeClass.TINY
        assert classify(F(1, 3) + F(1, 10**9)) is EdgeClass.SMALL
        assert classify(F(1, 2)) is EdgeClass.SMALL
        assert classify(F(1, 2) + F(1, 10**9)) is EdgeClass.BIG

    def test_simple_thresholds(self):
        assert classify(F(26, 100), "simple") is EdgeClass.TINY
        assert classify(F(27, 100), "simple") is EdgeClass.SMALL
        assert classify(F(1), "simple") is EdgeClass.BIG

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            classify(F(1, 2), "fancy")

    @given(st.fractions(min_value=0, max_value=1).filter(lambda w: w > 0),
           st.sampled_from(["simple", "general"]))
    def test_partition(self, w, mode):
        c = classify(w, mode)
        tiny = F(1, 3) if mode == "general" else F(26, 100)
        hits = [w <= tiny, tiny < w <= F(1, 2), w > F(1, 2)]
        assert sum(hits) == 1
        assert [EdgeClass.TINY, EdgeClass.SMALL, EdgeClass.BIG][hits.index(True)] is c


class TestFractions:
    def test_format(self):
        assert format_fraction(F(2)) == "2/1"
        assert format_fraction(F(-3, 6)) == "-1/2"

    @given(st.fractions())
    def test_parse_roundtrip(self, x):
        assert parse_fraction(format_fraction(x)) == x


class TestFingerprint:
    @given(graphs(max_n=4, max_m=5), st.randoms(use_true_random=False))
    @settings(max_examples=60)
    def test_relabel_invariant(self, g, rnd):
        perm = list(range(g.vertex_count))
        rnd.shuffle(perm)
        h = relabel(g, perm)
        assert canonical_edge_list(h) == canonical_edge_list(g)
        assert fingerprint(h) == fingerprint(g)

    def test_distinguishes(self, i1, i2, triangle):
        assert len({fingerprint(i1), fingerprint(i2), fingerprint(triangle)}) == 3
