"""Weighted multigraphs, orientations and the line-oriented instance format.

Weights are :class:`fractions.Fraction` throughout.  Edge ids are the dense
indices ``0..m-1`` in insertion (file) order; loops are edges whose two
endpoints coincide.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised for malformed instance files; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class WeightedMultigraph:
    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        for i, e in enumerate(self.edges):
            if not isinstance(e.weight, Fraction):
                raise TypeError(f"edge {i}: weight must be a Fraction")
            if e.weight <= 0:
                raise ValueError(f"edge {i}: weight must be positive")
            if not (0 <= e.u < self.vertex_count and 0 <= e.v < self.vertex_count):
                raise ValueError(f"edge {i}: endpoint out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, object]]) -> "WeightedMultigraph":
        """Build from ``(u, v, w)`` triples; ``w`` may be anything Fraction accepts."""
        return cls(n, tuple(Edge(u, v, Fraction(w)) for u, v, w in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weight(self, e: int) -> Fraction:
        return self.edges[e].weight

    def endpoints(self, e: int) -> tuple[int, int]:
        ed = self.edges[e]
        return ed.u, ed.v

    def is_loop(self, e: int) -> bool:
        return self.edges[e].is_loop

    def other(self, e: int, v: int) -> int:
        ed = self.edges[e]
        if v == ed.u:
            return ed.v
        if v == ed.v:
            return ed.u
        raise ValueError(f"vertex {v} is not an endpoint of edge {e}")

    def incident(self, v: int) -> list[int]:
        """Edge ids of delta(v), ascending; a loop is listed once."""
        return [i for i, e in enumerate(self.edges) if e.u == v or e.v == v]

    def total_weight(self) -> Fraction:
        return sum((e.weight for e in self.edges), Fraction(0))

    def max_weight(self) -> Fraction:
        return max((e.weight for e in self.edges), default=Fraction(0))

    def weight_denominator(self) -> int:
        """Least common multiple of all weight denominators."""
        return math.lcm(1, *(e.weight.denominator for e in self.edges))


@dataclass(frozen=True)
class Orientation:
    """``targets[e]`` is the vertex edge ``e`` points towards."""

    targets: tuple[int, ...]

    def target(self, e: int) -> int:
        return self.targets[e]

    def source(self, g: WeightedMultigraph, e: int) -> int:
        return g.other(e, self.targets[e])

    def validate(self, g: WeightedMultigraph) -> None:
        if len(self.targets) != g.edge_count:
            raise ValueError("orientation length does not match edge count")
        for e, t in enumerate(self.targets):
            if t not in g.endpoints(e):
                raise ValueError(f"edge {e}: target {t} is not an endpoint")

    def flipped(self, g: WeightedMultigraph, e: int) -> "Orientation":
        t = list(self.targets)
        t[e] = g.other(e, t[e])
        return Orientation(tuple(t))

    @classmethod
    def toward_second(cls, g: WeightedMultigraph) -> "Orientation":
        """Every edge points at the second endpoint as written (``u -> v``)."""
        return cls(tuple(e.v for e in g.edges))

    @classmethod
    def toward_first(cls, g: WeightedMultigraph) -> "Orientation":
        return cls(tuple(e.u for e in g.edges))


def in_edges(g: WeightedMultigraph, o: Orientation, v: int) -> list[int]:
    return [e for e, t in enumerate(o.targets) if t == v]


def weighted_in_degree(g: WeightedMultigraph, o: Orientation, v: int) -> Fraction:
    if not 0 <= v < g.vertex_count:
        raise ValueError(f"vertex {v} out of range")
    return sum((g.edges[e].weight for e, t in enumerate(o.targets) if t == v), Fraction(0))


def loads(g: WeightedMultigraph, o: Orientation) -> list[Fraction]:
    out = [Fraction(0)] * g.vertex_count
    for e, t in enumerate(o.targets):
        out[t] += g.edges[e].weight
    return out


def makespan(g: WeightedMultigraph, o: Orientation) -> Fraction:
    den = g.weight_denominator()
    out = [0] * g.vertex_count
    for e, t in zip(g.edges, o.targets):
        out[t] += e.weight.numerator * (den // e.weight.denominator)
    return Fraction(max(out, default=0), den)


def scale_weights(g: WeightedMultigraph, factor: Fraction) -> WeightedMultigraph:
    factor = Fraction(factor)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return WeightedMultigraph(
        g.vertex_count, tuple(Edge(e.u, e.v, e.weight * factor) for e in g.edges)
    )


class EdgeClass(enum.Enum):
    TINY = "tiny"
    SMALL = "small"
    BIG = "big"


SIMPLE_R = Fraction(74, 100)


def classify(weight: Fraction, mode: str = "general", R: Fraction = SIMPLE_R) -> EdgeClass:
    """Class of a normalized weight.

    general: tiny <= 1/3 < small <= 1/2 < big.
    simple:  tiny <= 1-R < small <= 1/2 < big (the simple algorithm only
    admits big weight exactly 1; that restriction is enforced by its driver).
    """
    tiny_cut = Fraction(1, 3) if mode == "general" else 1 - R
    if mode not in ("general", "simple"):
        raise ValueError(f"unknown mode {mode!r}")
    if weight <= tiny_cut:
        return EdgeClass.TINY
    if weight <= Fraction(1, 2):
        return EdgeClass.SMALL
    return EdgeClass.BIG


# -- file format ------------------------------------------------------------


def _parse_weight(tok: str, lineno: int) -> Fraction:
    try:
        if "/" in tok:
            p, q = tok.split("/", 1)
            w = Fraction(int(p), int(q))
        else:
            w = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise GraphFormatError(lineno, f"bad weight {tok!r}") from None
    if w <= 0:
        raise GraphFormatError(lineno, f"weight must be positive, got {tok}")
    return w


def parse_graph(text: str | bytes) -> WeightedMultigraph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "vertices":
            if n is not None:
                raise GraphFormatError(lineno, "duplicate 'vertices' header")
            if len(parts) != 2 or not parts[1].isdigit():
                raise GraphFormatError(lineno, "expected 'vertices <n>'")
            n = int(parts[1])
        elif parts[0] == "edge":
            if n is None:
                raise GraphFormatError(lineno, "'edge' before 'vertices' header")
            if len(parts) != 4:
                raise GraphFormatError(lineno, "expected 'edge <u> <v> <w>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(lineno, "vertex ids must be integers") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(lineno, f"vertex id out of range (n={n})")
            edges.append(Edge(u, v, _parse_weight(parts[3], lineno)))
        else:
            raise GraphFormatError(lineno, f"unknown directive {parts[0]!r}")
    if n is None:
        raise GraphFormatError(0, "missing 'vertices' header")
    return WeightedMultigraph(n, tuple(edges))


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    """Inverse of :func:`format_fraction`; also accepts decimals and signs."""
    s = s.strip()
    try:
        if "/" in s:
            p, q = s.split("/", 1)
            return Fraction(int(p), int(q))
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {s!r}") from None


def format_graph(g: WeightedMultigraph) -> str:
    lines = [f"vertices {g.vertex_count}"]
    lines += [f"edge {e.u} {e.v} {format_fraction(e.weight)}" for e in g.edges]
    return "\n".join(lines) + "\n"


# -- fingerprints -------------------------------------------------------------

_PERMUTATION_BUDGET = 50_000


def _edge_key(u: int, v: int, w: Fraction) -> tuple:
    return (u, v, w) if u <= v else (v, u, w)


def canonical_edge_list(g: WeightedMultigraph) -> tuple | None:
    """Lexicographically least sorted edge list over vertex relabelings.

    Relabelings are restricted to those preserving a simple vertex invariant
    (degree and incident weights), which keeps the minimum unchanged.  Returns
    None when the restricted search would exceed the permutation budget.
    """
    n = g.vertex_count
    inv = []
    for v in range(n):
        ws = sorted((e.weight, e.is_loop) for e in g.edges if v in (e.u, e.v))
        inv.append((len(ws), tuple(ws)))
    order = sorted(range(n), key=lambda v: inv[v])
    classes = [list(grp) for _, grp in itertools.groupby(order, key=lambda v: inv[v])]
    budget = 1
    for c in classes:
        budget *= math.factorial(len(c))
        if budget > _PERMUTATION_BUDGET:
            return None
    best = None
    for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        label = {}
        nxt = 0
        for block in choice:
            for v in block:
                label[v] = nxt
                nxt += 1
        key = tuple(sorted(_edge_key(label[e.u], label[e.v], e.weight) for e in g.edges))
        if best is None or key < best:
            best = key
    return best


def fingerprint(g: WeightedMultigraph) -> str:
    """Isomorphism-invariant hash (falls back to a labeled hash for huge symmetry)."""
    canon = canonical_edge_list(g)
    if canon is None:
        body = "labeled:" + format_graph(g)
    else:
        body = f"n={g.vertex_count};" + ";".join(
            f"{a},{b},{format_fraction(w)}" for a, b, w in canon
        )
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def relabel(g: WeightedMultigraph, perm: Sequence[int]) -> WeightedMultigraph:
    """Apply the vertex map ``v -> perm[v]``; edge ids are preserved."""
    return WeightedMultigraph(
        g.vertex_count, tuple(Edge(perm[e.u], perm[e.v], e.weight) for e in g.edges)
    )
