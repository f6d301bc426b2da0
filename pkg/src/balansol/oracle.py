"""Ground truth by brute force, plus instance generators for property suites."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .graph import Edge, Orientation, WeightedMultigraph, fingerprint

DEFAULT_EDGE_CAP = 20


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    integral_opt: Fraction
    witness: Orientation
    fingerprint: str


def brute_force_opt(g: WeightedMultigraph, cap: int = DEFAULT_EDGE_CAP) -> OracleResult:
    """Exact minimum makespan over every orientation of the non-loop edges.

    Depth-first over the edges with integer loads; a branch is abandoned
    once its partial makespan reaches the best complete one.
    """
    free = [e for e in range(g.edge_count) if not g.is_loop(e)]
    if len(free) > cap:
        raise OracleCapExceeded(f"{len(free)} non-loop edges exceed the cap of {cap}")
    den = g.weight_denominator()
    W = [int(e.weight * den) for e in g.edges]
    load = [0] * g.vertex_count
    target = [e.u for e in g.edges]
    for e in range(g.edge_count):
        if g.is_loop(e):
            load[g.edges[e].u] += W[e]
    free.sort(key=lambda e: -W[e])
    base = max(load, default=0)
    best = [math.inf, None]

    def rec(i: int, cur: int):
        if cur >= best[0]:
            return
        if i == len(free):
            best[0] = cur
            best[1] = list(target)
            return
        e = free[i]
        ed = g.edges[e]
        for t in (ed.u, ed.v):
            load[t] += W[e]
            target[e] = t
            rec(i + 1, max(cur, load[t]))
            load[t] -= W[e]

    rec(0, base)
    return OracleResult(Fraction(best[0], den), Orientation(tuple(best[1])), fingerprint(g))


# -- exhaustive generation ------------------------------------------------------------


def _kinds(n: int, pool: Sequence[Fraction], loops: bool) -> list[tuple[int, int, Fraction]]:
    out = []
    for u in range(n):
        for v in range(u, n):
            if u == v and not loops:
                continue
            out += [(u, v, w) for w in pool]
    return out


def enumerate_instances(
    max_vertices: int,
    max_edges: int,
    weight_pool: Sequence,
    include_loops: bool = True,
) -> Iterator[WeightedMultigraph]:
    """Every multigraph up to the bounds, one per isomorphism class.

    Graphs have at least one edge and no isolated vertex; the vertex count
    ranges over 1..max_vertices.  A graph is the sorted tuple of its edge
    kinds and is emitted only when that tuple is lexicographically least
    over all vertex relabelings.  Dropping the largest kind from a canonical
    tuple leaves a canonical tuple, so the depth-first extension below never
    needs to revisit a pruned branch.
    """
    pool = sorted({Fraction(w) for w in weight_pool})
    if any(w <= 0 or w > 1 for w in pool):
        raise ValueError("weights must lie in (0, 1]")
    for n in range(1, max_vertices + 1):
        kinds = _kinds(n, pool, include_loops)
        if not kinds:
            continue
        index = {k: i for i, k in enumerate(kinds)}
        perms = []
        for p in itertools.permutations(range(n)):
            if list(p) == list(range(n)):
                continue
            table = []
            for u, v, w in kinds:
                a, b = p[u], p[v]
                table.append(index[(min(a, b), max(a, b), w)])
            perms.append(table)
        touch = [(1 << u) | (1 << v) for u, v, _ in kinds]
        full = (1 << n) - 1
        seq: list[int] = []

        def canonical() -> bool:
            for t in perms:
                img = sorted(t[c] for c in seq)
                if img < seq:
                    return False
            return True

        def rec(start: int, covered: int):
            if seq and covered == full:
                yield WeightedMultigraph(
                    n, tuple(Edge(kinds[c][0], kinds[c][1], kinds[c][2]) for c in seq)
                )
            if len(seq) == max_edges:
                return
            # vertices are covered in label order only up to relabeling, so the
            # number of still-uncovered vertices bounds the edges left
            missing = n - covered.bit_count()
            if (missing + 1) // 2 > max_edges - len(seq):
                return
            for c in range(start, len(kinds)):
                seq.append(c)
                if canonical():
                    yield from rec(c, covered | touch[c])
                seq.pop()

        yield from rec(0, 0)


# -- families ----------------------------------------------------------------------------


GAP_POOL = tuple(Fraction(x) for x in ("1/4", "1/3", "1/2", "2/3", "3/4", "1"))


def parallel(k: int, w=1) -> WeightedMultigraph:
    return WeightedMultigraph.from_edges(2, [(0, 1, w)] * k)


def path_big(weights: Sequence, stubs: int = 3, stub_weight=1) -> WeightedMultigraph:
    """A path of big edges with leaf stubs at both ends.

    Written so that ``Orientation.toward_second`` gives the drawn orientation:
    the path runs left to right, the first end vertex receives one stub and
    sends the rest, the last end vertex receives all but one.
    """
    L = len(weights)
    edges = [(i, i + 1, w) for i, w in enumerate(weights)]
    nxt = L + 1
    for j in range(stubs):
        edges.append((nxt, 0, stub_weight) if j == 0 else (0, nxt, stub_weight))
        nxt += 1
    for j in range(stubs):
        edges.append((L, nxt, stub_weight) if j == stubs - 1 else (nxt, L, stub_weight))
        nxt += 1
    return WeightedMultigraph.from_edges(nxt, edges)


def random_graph(n: int, m: int, weight_pool: Sequence, seed: int = 0,
                 loops: bool = False) -> WeightedMultigraph:
    rng = random.Random(seed)
    pool = [Fraction(w) for w in weight_pool]
    edges = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n) if loops or n == 1 else rng.choice([x for x in range(n) if x != u])
        edges.append((u, v, rng.choice(pool)))
    return WeightedMultigraph.from_edges(n, edges)


def gap_probe(n: int, m: int, seed: int = 0) -> WeightedMultigraph:
    """Random instance over weights known to produce integrality gaps."""
    return random_graph(n, m, GAP_POOL, seed, loops=True)


def gen_family(name: str, params: dict | None = None, seed: int = 0) -> WeightedMultigraph:
    p = dict(params or {})
    if name == "parallel":
        return parallel(int(p.get("k", 3)), Fraction(p.get("w", 1)))
    if name == "path_big":
        ws = [Fraction(w) for w in p.get("weights", ["1", "0.85", "0.9"])]
        return path_big(ws, int(p.get("stubs", 3)), Fraction(p.get("stub_weight", 1)))
    if name == "random":
        pool = p.get("weight_pool", ["1/3", "1/2", "1"])
        return random_graph(int(p.get("n", 4)), int(p.get("m", 6)), pool, seed,
                            bool(p.get("loops", False)))
    if name == "gap_probe":
        return gap_probe(int(p.get("n", 4)), int(p.get("m", 6)), seed)
    raise ValueError(f"unknown family {name!r}")


FAMILIES = ("parallel", "path_big", "random", "gap_probe")
