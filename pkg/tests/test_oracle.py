import itertools
from fractions import Fraction

import pytest

from balansol.configlp import opt_star
from balansol.graph import Orientation, WeightedMultigraph, canonical_edge_list, fingerprint, makespan
from balansol.oracle import (
    GAP_POOL,
    OracleCapExceeded,
    brute_force_opt,
    enumerate_instances,
    gen_family,
    random_graph,
)

F = Fraction


class TestBruteForce:
    def test_i1(self, i1):
        assert brute_force_opt(i1).integral_opt == 1

    def test_i2(self, i2):
        r = brute_force_opt(i2)
        assert r.integral_opt == 2
        assert makespan(i2, r.witness) == 2
        assert r.fingerprint == fingerprint(i2)

    def test_triangle(self, triangle):
        assert brute_force_opt(triangle).integral_opt == 1

    def test_loops_forced(self):
        g = WeightedMultigraph.from_edges(2, [(0, 0, 1), (0, 1, F(1, 2))])
        r = brute_force_opt(g)
        assert r.integral_opt == 1 and r.witness.targets == (0, 1)

    def test_cap(self):
        g = WeightedMultigraph.from_edges(2, [(0, 1, 1)] * 5)
        with pytest.raises(OracleCapExceeded):
            brute_force_opt(g, cap=4)

    def test_matches_full_enumeration(self):
        for seed in range(40):
            g = random_graph(4, 6, GAP_POOL, seed, loops=True)
            best = min(
                makespan(g, Orientation(tuple(t)))
                for t in itertools.product(*(g.endpoints(e) for e in range(g.edge_count)))
            )
            assert brute_force_opt(g).integral_opt == best


def _reference(max_vertices, max_edges, pool, loops):
    """All graphs without isolated vertices, deduplicated by canonical edge lists."""
    seen = set()
    for n in range(1, max_vertices + 1):
        kinds = [(u, v, w) for u in range(n) for v in range(u, n) if loops or u != v for w in pool]
        for m in range(1, max_edges + 1):
            for combo in itertools.combinations_with_replacement(kinds, m):
                covered = {x for u, v, _ in combo for x in (u, v)}
                if len(covered) != n:
                    continue
                seen.add((n, canonical_edge_list(WeightedMultigraph.from_edges(n, combo))))
    return seen


class TestEnumerate:
    def test_single_loop(self):
        out = list(enumerate_instances(1, 1, [1], True))
        assert out == [WeightedMultigraph.from_edges(1, [(0, 0, 1)])]

    def test_i1_only(self, i1):
        assert list(enumerate_instances(2, 1, [1], False)) == [i1]

    def test_contains_i2(self, i2):
        assert i2 in list(enumerate_instances(2, 3, [1], False))

    @pytest.mark.parametrize("bounds", [
        (3, 3, [F(1, 2), F(1)], True),
        (4, 4, [F(1)], True),
        (3, 4, [F(1, 3), F(1)], False),
    ])
    def test_one_per_isomorphism_class(self, bounds):
        out = list(enumerate_instances(*bounds))
        keys = [(g.vertex_count, canonical_edge_list(g)) for g in out]
        assert len(keys) == len(set(keys))
        assert set(keys) == _reference(*bounds)

    def test_deterministic(self):
        a = list(enumerate_instances(3, 3, [F(1, 2), F(1)], True))
        b = list(enumerate_instances(3, 3, [F(1, 2), F(1)], True))
        assert a == b

    def test_pool_guard(self):
        with pytest.raises(ValueError):
            list(enumerate_instances(2, 2, [F(3, 2)]))


class TestFamilies:
    def test_parallel_is_i2(self, i2):
        assert gen_family("parallel", {"k": 3, "w": 1}) == i2

    def test_path_big_is_big_path(self, big_path):
        g = gen_family("path_big", {"weights": ["1", "0.85", "0.9"], "stubs": 3})
        assert g == big_path
        assert g.vertex_count == 10 and g.edge_count == 9
        assert [g.weight(e) for e in range(3)] == [1, F(17, 20), F(9, 10)]
        assert opt_star(g).opt_star == brute_force_opt(g).integral_opt == 1

    def test_random_reproducible(self):
        p = {"n": 4, "m": 6, "weight_pool": ["1/3", "1/2", "1"]}
        assert gen_family("random", p, seed=7) == gen_family("random", p, seed=7)
        assert gen_family("random", p, seed=7) != gen_family("random", p, seed=8)

    def test_gap_probe(self):
        g = gen_family("gap_probe", {"n": 3, "m": 5}, seed=2)
        assert g.edge_count == 5 and all(e.weight in GAP_POOL for e in g.edges)

    def test_unknown(self):
        with pytest.raises(ValueError):
            gen_family("star", {})
