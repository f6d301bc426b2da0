"""General local search with raw and regular pending flips and the set Q."""

from __future__ import annotations


from .configlp import balanced_big_orientation, initial_orientation, lp_feasible
from .graph import Orientation, WeightedMultigraph
from .params import GeneralParams, default_params
from .search import (
    RAW,
    REG,
    CapExceeded,
    Done,
    SearchState,
    Stuck,
    _bits,
    big_counts_ok,
)


def starting_orientation(g: WeightedMultigraph, tau, cap=None) -> Orientation:
    """LP-preferred orientation when the LP is feasible at tau, else the greedy one."""
    sol = lp_feasible(g, tau, cap)
    if sol:
        return initial_orientation(g, sol)
    return balanced_big_orientation(g, tau)


def new_state(g, tau, orientation=None, params=None, check=True, trace=None) -> SearchState:
    params = params or default_params("general")
    o = orientation if orientation is not None else starting_orientation(g, tau)
    if not big_counts_ok(g, o, tau):
        raise ValueError("starting orientation puts more than two big edges on a vertex")
    return SearchState(g, tau, params, o, check=check, trace=trace)


def update_repelled_general(g, state: SearchState, k: int) -> frozenset[tuple[int, int]]:
    row = state.rep[k]
    return frozenset((v, e) for v in range(state.n) for e in _bits(row[v]))


def is_raw_addable(g, state: SearchState, e: int) -> bool:
    return state.is_raw_addable(e)


def is_regular_addable(g, state: SearchState, e: int) -> bool:
    return state.is_regular_addable(e)


def update_Q(g, state: SearchState) -> SearchState:
    state.update_q()
    return state


def step_general(g, state: SearchState) -> str:
    return state.step()


def derive_F(state: SearchState) -> set[int]:
    return set(_bits(state.F_mask()))


def derive_H(g, state: SearchState, params=None) -> set[int]:
    if params is not None and params.R != state.params.R:
        heavy = {e for e in range(state.m) if state.norm[e] > params.R}
        return heavy - derive_F(state)
    return set(_bits(state.H_mask()))


def run_general(
    g: WeightedMultigraph,
    tau,
    iteration_cap: int = 1_000_000,
    orientation: Orientation | None = None,
    params: GeneralParams | None = None,
    check: bool = True,
    trace=None,
) -> Done | Stuck | CapExceeded:
    state = new_state(g, tau, orientation, params, check, trace)
    return state.run(iteration_cap)


def stuck_facts(state: SearchState) -> list[str]:
    """Violations of the properties a stuck general state must have (empty if none)."""
    out: list[str] = []
    W, S = state.W, state.S
    et = state.tilde()
    row = state.rep[-1]
    big = state.bigmask
    q = state.q_all()
    qmask = sum(1 << e for e in q)
    F = state.F_mask()
    H = state.H_mask()
    pmask = state.edges_in_P()

    def bin_of(x):
        return state.inmask[x] & big

    for e, kind in state.P:
        if kind != RAW or not big >> e & 1:
            continue
        t = state.target[e]
        outs = row[t] & state.outmask(t) & ~state.loopmask
        cond = W[e] <= state.q_hi and any(W[e] + W[f] <= S for f in _bits(outs))
        if (e in q) != cond:
            out.append(f"Q characterization fails for edge {e}")

    for e, kind in state.P:
        if kind != RAW:
            continue
        x = state.source(e)
        b = bin_of(x)
        nb = b.bit_count()
        has_reg = (e, REG) in state.pset
        if big >> e & 1:
            cond = nb <= 1 and (
                e in q
                or (sum(W[f] for f in _bits(b)) <= state.R_int and b & F & ~qmask == 0)
            )
            if has_reg != cond:
                out.append(f"regular-big characterization fails for edge {e}")
        elif W[e] > state.tiny_cut:
            cond = nb <= 1 or any(W[e] + W[f] <= S for f in _bits(b))
            if has_reg != cond:
                out.append(f"regular-small characterization fails for edge {e}")

    if F & ~pmask:
        out.append("F is not contained in P")
    if pmask & ~et:
        out.append("P is not contained in E~")
    if qmask & ~pmask:
        out.append("Q is not contained in P")
    if H & ~big:
        out.append("H is not contained in B")
    if F & ~big:
        out.append("F is not contained in B")
    for e in range(state.m):
        if row[state.target[e]] >> e & 1 and not et >> e & 1:
            out.append(f"edge {e} repelled by its holder but not in E~")
    for e, _ in state.P:
        if state.is_bad(state.source(e)):
            out.append(f"pending flip {e} points at a bad vertex")
    for v in range(state.n):
        if bin_of(v).bit_count() > 2:
            out.append(f"vertex {v} holds three big edges")
    return out


__all__ = [
    "CapExceeded",
    "Done",
    "Stuck",
    "derive_F",
    "derive_H",
    "is_raw_addable",
    "is_regular_addable",
    "new_state",
    "run_general",
    "starting_orientation",
    "step_general",
    "stuck_facts",
    "update_Q",
    "update_repelled_general",
]
