"""Configuration LP: column enumeration, exact feasibility, OPT* and the
LP-guided starting orientation.

Only inclusion-maximal configurations are used as LP columns.  Any feasible
solution over all configurations can be pushed onto maximal supersets
without breaking a constraint, so the feasibility answer is the same.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .graph import Orientation, WeightedMultigraph, makespan
from .simplex import phase_one

DEFAULT_CAP = 2**20
_DENSITY_MAX_VERTICES = 12


class InstanceTooLarge(RuntimeError):
    """The configuration count exceeds the configured cap."""


def default_cap() -> int:
    raw = os.environ.get("BALANSOL_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True, order=True)
class Configuration:
    vertex: int
    edge_set: tuple[int, ...]
    total_weight: Fraction = field(compare=False)


@dataclass
class PrimalSolution:
    tau: Fraction
    entries: dict[Configuration, Fraction]

    def coverage(self, e: int, v: int) -> Fraction:
        return sum(
            (x for c, x in self.entries.items() if c.vertex == v and e in c.edge_set),
            Fraction(0),
        )

    def violations(self, g: WeightedMultigraph) -> list[str]:
        """Every broken primal constraint, as readable strings (empty if feasible)."""
        out = []
        per_vertex = [Fraction(0)] * g.vertex_count
        cover = [Fraction(0)] * g.edge_count
        for c, x in self.entries.items():
            if x < 0:
                out.append(f"negative x at {c}")
            if c.total_weight > self.tau:
                out.append(f"configuration {c} heavier than tau")
            if c.total_weight != sum((g.weight(e) for e in c.edge_set), Fraction(0)):
                out.append(f"configuration {c} has a wrong total weight")
            for e in c.edge_set:
                if c.vertex not in g.endpoints(e):
                    out.append(f"edge {e} not incident to {c.vertex}")
                cover[e] += x
            per_vertex[c.vertex] += x
        out += [f"vertex {v} uses {s} > 1" for v, s in enumerate(per_vertex) if s > 1]
        out += [f"edge {e} covered {s} < 1" for e, s in enumerate(cover) if s < 1]
        return out

    def is_feasible(self, g: WeightedMultigraph) -> bool:
        return not self.violations(g)


@dataclass(frozen=True)
class Infeasible:
    tau: Fraction
    reason: str

    def __bool__(self):
        return False


@dataclass
class OptStarResult:
    opt_star: Fraction
    witness: PrimalSolution
    breakpoints: tuple[Fraction, ...]
    tested: tuple[tuple[Fraction, bool], ...] = ()


# -- integer views -------------------------------------------------------------


def _feasible_subsets(ws: Sequence[int], cap_int: int, limit: int) -> list[int]:
    """Bitmasks (over positions of ``ws``) of all subsets with sum <= cap_int."""
    out: list[int] = []
    d = len(ws)

    def rec(i: int, mask: int, total: int):
        if i == d:
            out.append(mask)
            if len(out) > limit:
                raise InstanceTooLarge(f"more than {limit} configurations")
            return
        rec(i + 1, mask, total)
        if total + ws[i] <= cap_int:
            rec(i + 1, mask | (1 << i), total + ws[i])

    rec(0, 0, 0)
    return out


def _maximal_subsets(ws: Sequence[int], cap_int: int, limit: int) -> list[int]:
    subsets = _feasible_subsets(ws, cap_int, limit)
    res = []
    for mask in subsets:
        slack = cap_int - sum(w for i, w in enumerate(ws) if mask >> i & 1)
        if all(mask >> i & 1 or w > slack for i, w in enumerate(ws)):
            res.append(mask)
    return res


def _order_key(edges: tuple[int, ...]):
    return (len(edges), edges)


def enumerate_configurations(
    g: WeightedMultigraph,
    v: int,
    tau,
    maximal_only: bool = False,
    cap: int | None = None,
) -> list[Configuration]:
    """Configurations of ``v`` at ``tau``, ordered by size then edge ids."""
    if not 0 <= v < g.vertex_count:
        raise ValueError(f"vertex {v} out of range")
    tau = Fraction(tau)
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    cap = default_cap() if cap is None else cap
    return [
        Configuration(v, es, sum((g.weight(e) for e in es), Fraction(0)))
        for es in configuration_edge_sets(g, v, tau, maximal_only, cap)
    ]


def configuration_edge_sets(
    g: WeightedMultigraph, v: int, tau: Fraction, maximal_only: bool, cap: int
) -> list[tuple[int, ...]]:
    """Edge-id tuples of the configurations, in the same order as above."""
    inc = g.incident(v)
    ws, t = _scale_local(g, inc, tau)
    finder = _maximal_subsets if maximal_only else _feasible_subsets
    sets = [tuple(inc[i] for i in range(len(inc)) if mask >> i & 1) for mask in finder(ws, t, cap)]
    sets.sort(key=_order_key)
    return sets


def _scale_local(g, inc, tau):
    den = math.lcm(tau.denominator, *(g.weight(e).denominator for e in inc))
    return [int(g.weight(e) * den) for e in inc], int(tau * den)


# -- feasibility -------------------------------------------------------------------


def density_bound(g: WeightedMultigraph) -> Fraction:
    """max over vertex sets S of w(E[S]) / |S|, a lower bound on OPT*.

    Exact for up to a dozen vertices; larger graphs fall back to the
    single-vertex sets and the whole graph.
    """
    if g.vertex_count == 0 or not g.edges:
        return Fraction(0)
    return _density(g)


@functools.lru_cache(maxsize=4096)
def _density(g: WeightedMultigraph) -> Fraction:
    n = g.vertex_count
    if n > _DENSITY_MAX_VERTICES:
        cands = [1 << v for v in range(n)] + [(1 << n) - 1]
    else:
        cands = range(1, 1 << n)
    den = g.weight_denominator()
    pairs = [((1 << e.u) | (1 << e.v), int(e.weight * den)) for e in g.edges]
    best_num, best_size = 0, 1
    for S in cands:
        tot = sum(w for m, w in pairs if m & S == m)
        size = S.bit_count()
        if tot * best_size > best_num * size:
            best_num, best_size = tot, size
    return Fraction(best_num, best_size * den)


def _presolve(g: WeightedMultigraph, tau: Fraction) -> Infeasible | None:
    for i, e in enumerate(g.edges):
        if e.weight > tau:
            return Infeasible(tau, f"edge {i} is heavier than tau")
    if density_bound(g) > tau:
        return Infeasible(tau, "some vertex set carries more than tau per vertex")
    return None


def lp_feasible(
    g: WeightedMultigraph,
    tau,
    cap: int | None = None,
    presolve: bool = True,
) -> PrimalSolution | Infeasible:
    """Exact feasibility of the configuration LP at ``tau``."""
    tau = Fraction(tau)
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    cap = default_cap() if cap is None else cap
    if not g.edges:
        return PrimalSolution(tau, {})
    if presolve:
        bad = _presolve(g, tau)
        if bad is not None:
            return bad

    columns: list[Configuration] = []
    for v in range(g.vertex_count):
        if g.incident(v):
            columns += [
                c for c in enumerate_configurations(g, v, tau, True, cap - len(columns))
                if c.edge_set
            ]
    if len(columns) > cap:
        raise InstanceTooLarge(f"{len(columns)} columns exceed cap {cap}")
    if not presolve and any(not any(e in c.edge_set for c in columns) for e in range(g.edge_count)):
        return Infeasible(tau, "an edge fits in no configuration")

    vrows = sorted({c.vertex for c in columns})
    vidx = {v: i for i, v in enumerate(vrows)}
    A = [[0] * len(columns) for _ in range(len(vrows) + g.edge_count)]
    for j, c in enumerate(columns):
        A[vidx[c.vertex]][j] = 1
        for e in c.edge_set:
            A[len(vrows) + e][j] = 1
    senses = ["<="] * len(vrows) + [">="] * g.edge_count
    b = [1] * len(vrows) + [1] * g.edge_count
    res = phase_one(A, senses, b)
    if not res.feasible:
        return Infeasible(tau, "phase-one simplex found no solution")
    entries = {c: x for c, x in zip(columns, res.x) if x}
    sol = PrimalSolution(tau, entries)
    problems = sol.violations(g)
    if problems:  # would mean a simplex bug; never return an unchecked witness
        raise RuntimeError("simplex witness fails the primal check: " + problems[0])
    return sol


# -- OPT* ----------------------------------------------------------------------------


def breakpoints(g: WeightedMultigraph, cap: int | None = None) -> tuple[Fraction, ...]:
    """Sorted distinct positive subset sums of δ(v) over all vertices."""
    cap = default_cap() if cap is None else cap
    if not g.edges:
        return (Fraction(0),)
    den = g.weight_denominator()
    seen: set[int] = set()
    budget = cap
    for v in range(g.vertex_count):
        sums = {0}
        for e in g.incident(v):
            w = int(g.weight(e) * den)
            sums |= {s + w for s in sums}
            if len(sums) > budget:
                raise InstanceTooLarge("too many subset sums")
        budget -= len(sums)
        seen |= sums
    seen.discard(0)
    return tuple(Fraction(s, den) for s in sorted(seen))


def primal_from_orientation(
    g: WeightedMultigraph, o: Orientation, tau=None
) -> PrimalSolution:
    """The integral solution taking every vertex's in-edges as its configuration."""
    ms = makespan(g, o)
    tau = ms if tau is None else Fraction(tau)
    if ms > tau:
        raise ValueError(f"orientation makespan {ms} exceeds tau {tau}")
    groups: dict[int, list[int]] = {}
    for e, t in enumerate(o.targets):
        groups.setdefault(t, []).append(e)
    entries = {}
    for v, es in sorted(groups.items()):
        c = Configuration(v, tuple(es), sum((g.weight(e) for e in es), Fraction(0)))
        entries[c] = Fraction(1)
    return PrimalSolution(tau, entries)


def heuristic_orientation(g: WeightedMultigraph) -> Orientation:
    """Greedy by decreasing weight, then improving single-edge moves."""
    load = [Fraction(0)] * g.vertex_count
    target = [0] * g.edge_count
    for e in sorted(range(g.edge_count), key=lambda e: (-g.weight(e), e)):
        u, v = g.endpoints(e)
        t = v if load[v] < load[u] else min(u, v) if load[u] == load[v] else u
        target[e] = t
        load[t] += g.weight(e)
    for _ in range(4 * g.edge_count + 4):
        top = max(load)
        moved = False
        for e in range(g.edge_count):
            t = target[e]
            if load[t] != top or g.is_loop(e):
                continue
            o = g.other(e, t)
            if load[o] + g.weight(e) < top:
                load[t] -= g.weight(e)
                load[o] += g.weight(e)
                target[e] = o
                moved = True
                break
        if not moved:
            break
    return Orientation(tuple(target))


def opt_star(
    g: WeightedMultigraph,
    cap: int | None = None,
    hint: Orientation | None = None,
    use_bounds: bool = True,
) -> OptStarResult:
    """Smallest breakpoint at which the configuration LP is feasible.

    The search is bracketed below by the max edge weight and the density
    bound, and above by the makespan of an integral orientation (``hint`` or
    a heuristic one), whose integral solution is the witness if nothing
    smaller turns out to be feasible.
    """
    cap = default_cap() if cap is None else cap
    bps = breakpoints(g, cap)
    if not g.edges:
        return OptStarResult(Fraction(0), PrimalSolution(Fraction(0), {}), bps)
    o = hint if hint is not None else heuristic_orientation(g)
    ub = makespan(g, o)
    if use_bounds:
        lb = max(g.max_weight(), density_bound(g))
        cands = [b for b in bps if lb <= b <= ub]
    else:
        cands = [b for b in bps if b <= ub]
    if not cands or cands[-1] != ub:
        raise RuntimeError("upper bound is not a breakpoint")

    tested: list[tuple[Fraction, bool]] = []
    sols: dict[Fraction, PrimalSolution] = {}
    lo, hi = 0, len(cands) - 1  # cands[hi] is known feasible
    while lo < hi:
        mid = (lo + hi) // 2
        r = lp_feasible(g, cands[mid], cap)
        tested.append((cands[mid], bool(r)))
        if r:
            sols[cands[mid]] = r
            hi = mid
        else:
            lo = mid + 1
    best = cands[hi]
    witness = sols.get(best) or primal_from_orientation(g, o, best)
    return OptStarResult(best, witness, bps, tuple(tested))


# -- orientations from the LP ----------------------------------------------------------


def big_threshold(tau: Fraction) -> Fraction:
    """Weights strictly above this are big (general mode, in units of tau)."""
    return Fraction(tau) / 2


def initial_orientation(g: WeightedMultigraph, sol: PrimalSolution) -> Orientation:
    """Orient each edge toward the endpoint whose configurations cover it more."""
    cov: dict[tuple[int, int], Fraction] = {}
    for c, x in sol.entries.items():
        for e in c.edge_set:
            cov[(e, c.vertex)] = cov.get((e, c.vertex), Fraction(0)) + x
    targets = []
    for e, ed in enumerate(g.edges):
        cu, cv = cov.get((e, ed.u), Fraction(0)), cov.get((e, ed.v), Fraction(0))
        if cu > cv:
            targets.append(ed.u)
        elif cv > cu:
            targets.append(ed.v)
        else:
            targets.append(min(ed.u, ed.v))
    o = Orientation(tuple(targets))
    half = big_threshold(sol.tau)
    counts = [0] * g.vertex_count
    for e, t in enumerate(targets):
        if g.weight(e) > half:
            counts[t] += 1
    if any(c > 2 for c in counts):
        raise RuntimeError("LP-preferred orientation puts three big edges on a vertex")
    return o


class OrientationError(ValueError):
    """No orientation keeps at most two big edges on every vertex."""


def balanced_big_orientation(g: WeightedMultigraph, tau) -> Orientation:
    """A starting orientation with at most two big edges per vertex, without the LP.

    Big edges go greedily (heaviest first) to the endpoint holding fewer big
    edges; overfull vertices are then repaired along augmenting paths.  Other
    edges go to the endpoint with the smaller load.
    """
    tau = Fraction(tau)
    n = g.vertex_count
    den = g.weight_denominator()
    W = [e.weight.numerator * (den // e.weight.denominator) for e in g.edges]
    # w > tau/2  <=>  2 W td > tn den
    cut = tau.numerator * den
    big = [e for e in range(g.edge_count) if 2 * W[e] * tau.denominator > cut]
    big.sort(key=lambda e: (-W[e], e))
    target = [-1] * g.edge_count
    cnt = [0] * n
    for e in big:
        u, v = g.endpoints(e)
        t = u if cnt[u] < cnt[v] else v if cnt[v] < cnt[u] else min(u, v)
        target[e] = t
        cnt[t] += 1
    while True:
        over = next((v for v in range(n) if cnt[v] > 2), None)
        if over is None:
            break
        path = _augmenting_path(g, big, target, cnt, over)
        if path is None:
            raise OrientationError(f"vertex {over} cannot shed its third big edge")
        for e in path:
            t_old = target[e]
            target[e] = g.other(e, t_old)
            cnt[t_old] -= 1
            cnt[target[e]] += 1
    load = [0] * n
    for e in big:
        load[target[e]] += W[e]
    rest = sorted((e for e in range(g.edge_count) if target[e] < 0), key=lambda e: (-W[e], e))
    for e in rest:
        u, v = g.endpoints(e)
        t = u if load[u] < load[v] else v if load[v] < load[u] else min(u, v)
        target[e] = t
        load[t] += W[e]
    return Orientation(tuple(target))


def _augmenting_path(g, big, target, cnt, start):
    """Big edges to reverse so that ``start`` loses one and a vertex below 2 gains one."""
    prev: dict[int, tuple[int, int] | None] = {start: None}
    queue = [start]
    for x in queue:
        for e in big:
            if target[e] != x or g.is_loop(e):
                continue
            y = g.other(e, x)
            if y in prev:
                continue
            prev[y] = (x, e)
            if cnt[y] < 2:
                path = []
                node = y
                while prev[node] is not None:
                    px, pe = prev[node]
                    path.append(pe)
                    node = px
                return path
            queue.append(y)
    return None


def dual_objective(
    g: WeightedMultigraph,
    y: Mapping[int, Fraction] | Sequence[Fraction],
    z: Mapping[int, Fraction] | Sequence[Fraction],
) -> Fraction:
    """Σ_v y_v − Σ_e z_e, exactly."""
    yv = [Fraction(y[v]) for v in range(g.vertex_count)]
    ze = [Fraction(z[e]) for e in range(g.edge_count)]
    return sum(yv, Fraction(0)) - sum(ze, Fraction(0))


__all__ = [
    "Configuration",
    "DEFAULT_CAP",
    "Infeasible",
    "InstanceTooLarge",
    "OptStarResult",
    "OrientationError",
    "PrimalSolution",
    "balanced_big_orientation",
    "big_threshold",
    "breakpoints",
    "default_cap",
    "density_bound",
    "dual_objective",
    "enumerate_configurations",
    "heuristic_orientation",
    "initial_orientation",
    "lp_feasible",
    "opt_star",
    "primal_from_orientation",
]
