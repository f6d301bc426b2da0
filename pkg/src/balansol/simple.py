"""Local search for instances whose normalized weights lie in (0, 1/2] or equal 1."""

from __future__ import annotations

import enum
from fractions import Fraction

from . import search
from .graph import Orientation, WeightedMultigraph, weighted_in_degree
from .params import SimpleParams, default_params
from .search import CapExceeded, Done, ModeError, SearchState, Stuck


class VertexStatus(enum.Enum):
    GOOD = "good"
    BAD = "bad"


def classify_vertex(g: WeightedMultigraph, o: Orientation, v: int, params=None) -> VertexStatus:
    params = params or default_params("simple")
    bad = weighted_in_degree(g, o, v) > 1 + params.R
    return VertexStatus.BAD if bad else VertexStatus.GOOD


def check_weights(g: WeightedMultigraph, tau) -> None:
    tau = Fraction(tau)
    for i, e in enumerate(g.edges):
        w = e.weight / tau
        if not (w <= Fraction(1, 2) or w == 1):
            raise ModeError(f"edge {i}: normalized weight {w} is neither <= 1/2 nor 1")


def new_state(g, tau, orientation=None, params=None, check=True, trace=None) -> SearchState:
    params = params or default_params("simple")
    check_weights(g, tau)
    o = orientation if orientation is not None else Orientation.toward_second(g)
    return SearchState(g, tau, params, o, check=check, trace=trace)


def compute_W0(g: WeightedMultigraph, state: SearchState, k: int) -> Fraction:
    """W0 of the k-th pending flip, in normalized units (0 when the flip is valid)."""
    if not 1 <= k <= len(state.P):
        raise IndexError("prefix index out of range")
    return Fraction(state.compute_w0(k), state.S)


def update_repelled(g: WeightedMultigraph, state: SearchState, k: int) -> frozenset[tuple[int, int]]:
    """The repel relation w.r.t. the first k pending flips, as (vertex, edge) pairs."""
    row = state.rep[k]
    return frozenset((v, e) for v in range(state.n) for e in search._bits(row[v]))


def is_valid_flip(g: WeightedMultigraph, state: SearchState, e: int) -> bool:
    return state.is_valid_flip(e)


def step_simple(g: WeightedMultigraph, state: SearchState) -> str:
    return state.step()


def potential_simple(g: WeightedMultigraph, state: SearchState) -> tuple[int, ...]:
    return state.potential()


def run_simple(
    g: WeightedMultigraph,
    tau,
    iteration_cap: int = 1_000_000,
    orientation: Orientation | None = None,
    params: SimpleParams | None = None,
    check: bool = True,
    trace=None,
) -> Done | Stuck | CapExceeded:
    """Run the simple variant at ``tau``; starts from ``u -> v`` as written unless told otherwise."""
    state = new_state(g, tau, orientation, params, check, trace)
    return state.run(iteration_cap)
