from fractions import Fraction

import pytest

from balansol.graph import Orientation, WeightedMultigraph, makespan
from balansol.params import SimpleParams
from balansol.search import REG, CapExceeded, Done, ModeError, SearchState, Stuck
from balansol.simple import (
    VertexStatus,
    classify_vertex,
    compute_W0,
    is_valid_flip,
    new_state,
    potential_simple,
    run_simple,
    step_simple,
    update_repelled,
)

F = Fraction
G = WeightedMultigraph.from_edges


def overloaded_hub(extra):
    """Vertex 0 is bad: a weight-1 loop plus two 1/2 edges toward it.

    Edge 0 runs from vertex 1 into 0, edge 1 from vertex 4.  ``extra`` edges
    are appended after the loop (ids 3, 4, ...).
    """
    return G(5, [(1, 0, F(1, 2)), (4, 0, F(1, 2)), (0, 0, 1), *extra])


class TestClassify:
    def test_empty(self, i1):
        assert classify_vertex(i1, Orientation((1,)), 0) is VertexStatus.GOOD

    def test_boundary_inclusive(self):
        g = G(2, [(0, 1, 1), (0, 1, F(74, 100))])
        assert classify_vertex(g, Orientation((1, 1)), 1) is VertexStatus.GOOD

    def test_two_unit_edges(self, i2):
        assert classify_vertex(i2, Orientation((1, 1, 0)), 1) is VertexStatus.BAD


class TestW0:
    def test_load_entirely_in_tilde(self):
        # vertex 2 is bad (two unit loops) and sends 1 and 1/2 into vertex 1;
        # both are repelled by their source, so they sit in E~
        g = overloaded_hub([(2, 2, 1), (2, 2, 1), (2, 1, 1), (2, 1, F(1, 2))])
        st = new_state(g, 1)
        st.push(0)
        assert st.tilde(0) >> 5 & 1 and st.tilde(0) >> 6 & 1
        assert compute_W0(g, st, 1) == F(1, 2)

    def test_valid_flip_gives_zero(self):
        g = overloaded_hub([])
        st = new_state(g, 1)
        st.push(0)
        assert is_valid_flip(g, st, 0)
        assert compute_W0(g, st, 1) == 0

    def test_single_loose_tiny_edge(self):
        # vertex 1 holds a unit edge and a 1/4 edge, neither in E~; the flip
        # of weight 1/2 fits only once the 1/4 edge is discounted
        g = overloaded_hub([(2, 1, 1), (3, 1, F(1, 4))])
        st = new_state(g, 1)
        st.push(0)
        assert compute_W0(g, st, 1) == F(1, 4)
        # brute force over every W in (0, 1/2] on a fine grid
        best = F(0)
        for i in range(1, 201):
            W = F(i, 400)
            load = sum((st.norm[f] for f in (3, 4) if st.norm[f] >= W), F(0))
            if load + F(1, 2) > F(174, 100):
                best = W
        assert best == F(1, 4)

    def test_index_range(self, i1):
        st = new_state(i1, 1)
        with pytest.raises(IndexError):
            compute_W0(i1, st, 1)


class TestUpdateRepelled:
    def test_initialization(self):
        g = overloaded_hub([(3, 3, F(1, 4)), (2, 3, F(1, 2))])
        st = new_state(g, 1)
        rel = update_repelled(g, st, 0)
        assert {(0, 0), (0, 1), (0, 2)} <= rel
        assert (3, 3) in rel
        assert not any(v == 2 for v, _ in rel)
        # E~ holds the loops only: bad vertex 0 sources nothing
        assert st.tilde(0) == (1 << 2) | (1 << 3)

    def test_tiny_flip_makes_target_critical(self):
        g = G(5, [(1, 0, F(1, 4)), (4, 0, 1), (0, 0, 1), (2, 1, 1), (3, 1, F(1, 2))])
        st = new_state(g, 1)
        st.push(0)
        assert compute_W0(g, st, 1) == F(1, 4)
        assert st.critical_vertices() == {1}
        assert {e for v, e in update_repelled(g, st, 1) if v == 1} == {0, 3, 4}

    def test_big_flip_on_big_only_vertex(self):
        # edge 0 (unit) waits on bad vertex 0; vertex 1 holds one unit edge and
        # sends out a tiny one
        g = G(4, [(1, 0, 1), (0, 0, 1), (2, 1, 1), (1, 3, F(1, 4))])
        st = new_state(g, 1)
        st.push(0)
        assert compute_W0(g, st, 1) == 1
        assert st.critical_vertices() == set()
        assert {e for v, e in update_repelled(g, st, 1) if v == 1} == {0, 2}

    def test_monotone(self):
        g = G(5, [(1, 0, F(1, 4)), (4, 0, 1), (0, 0, 1), (2, 1, 1), (3, 1, F(1, 2))])
        st = new_state(g, 1)
        st.push(0)
        assert update_repelled(g, st, 0) <= update_repelled(g, st, 1)


class TestValidFlip:
    def test_empty_target(self):
        g = overloaded_hub([])
        st = new_state(g, 1)
        assert is_valid_flip(g, st, 0) and is_valid_flip(g, st, 1)

    def test_full_target(self):
        g = G(3, [(1, 0, 1), (2, 1, 1), (2, 1, F(74, 100))])
        st = SearchState(g, 1, SimpleParams(), Orientation((0, 1, 1)))
        assert not is_valid_flip(g, st, 0)

    def test_exact_fit(self):
        g = G(3, [(1, 0, F(74, 100)), (2, 1, 1)])
        st = SearchState(g, 1, SimpleParams(), Orientation((0, 1)))
        assert is_valid_flip(g, st, 0)


class TestStep:
    def test_done_immediately(self, i1):
        st = new_state(i1, 1)
        assert step_simple(i1, st) == "done"

    def test_i2_normalized_starts_good(self, i2):
        # all three halves on one vertex weigh 3/2 <= 1.74: nothing to do
        st = new_state(i2, 2, Orientation((0, 0, 0)))
        assert st.nbad == 0
        assert step_simple(i2, st) == "done"

    def test_four_halves_progress(self):
        g = G(2, [(0, 1, F(1, 2))] * 4)
        st = new_state(g, 1, Orientation((0, 0, 0, 0)))
        assert st.nbad == 1
        assert step_simple(g, st) == "progress"
        assert [e for e, _ in st.P] == [0]
        assert step_simple(g, st) == "progress"
        assert st.nbad == 0 and st.P == []
        assert step_simple(g, st) == "done"

    def test_i2_unit_gets_stuck(self, i2):
        res = run_simple(i2, 1)
        assert isinstance(res, Stuck)
        assert res.state.is_stuck()
        assert step_simple(i2, res.state) == "stuck"

    def test_mode_violation(self):
        g = G(2, [(0, 1, F(3, 4))])
        with pytest.raises(ModeError):
            run_simple(g, 1)

    def test_loops_never_pending(self):
        g = G(2, [(0, 0, 1), (0, 0, 1), (0, 1, F(1, 4))])
        res = run_simple(g, 1, orientation=Orientation((0, 0, 0)))
        assert all(not g.is_loop(e) for e, _ in res.state.P)


class TestPotential:
    def test_all_good_empty(self):
        g = G(3, [(0, 0, F(1, 2)), (0, 1, F(1, 2)), (2, 2, F(1, 4))])
        st = new_state(g, 1)
        assert potential_simple(g, st) == (3, 2, -1)

    def test_append_replaces_tail(self):
        g = overloaded_hub([(2, 1, 1), (3, 1, F(1, 4))])
        st = new_state(g, 1)
        before = potential_simple(g, st)
        step_simple(g, st)
        after = potential_simple(g, st)
        assert after[: len(before) - 1] == before[:-1]
        assert after[len(before) - 1] >= 0 and after[-1] == -1
        assert len(after) == len(before) + 1

    def test_execute_raises_component(self):
        g = G(2, [(0, 1, F(1, 2))] * 4)
        st = new_state(g, 1, Orientation((0, 0, 0, 0)))
        step_simple(g, st)
        mid = potential_simple(g, st)
        step_simple(g, st)
        after = potential_simple(g, st)
        assert after > mid
        assert after[0] > mid[0]  # truncation to k = 0: the good count rose


class TestRun:
    def test_i1(self, i1):
        res = run_simple(i1, 1)
        assert isinstance(res, Done) and res.makespan == 1

    def test_i2_at_opt(self, i2):
        res = run_simple(i2, 2)
        assert isinstance(res, Done)
        assert res.makespan <= F(174, 100) * 2
        assert res.makespan == makespan(i2, res.orientation)

    def test_cap(self):
        g = G(2, [(0, 1, F(1, 2))] * 4)
        res = run_simple(g, 1, iteration_cap=1, orientation=Orientation((0, 0, 0, 0)))
        assert isinstance(res, CapExceeded) and res.iterations == 1

    def test_trace_kinds(self):
        g = G(2, [(0, 1, F(1, 2))] * 4)
        events = []
        run_simple(g, 1, orientation=Orientation((0, 0, 0, 0)), trace=events.append)
        kinds = [ev["event"] for ev in events]
        assert kinds == ["flip-appended", "flip-executed", "prefix-truncated", "done"]
        assert events[0]["kind"] == REG
