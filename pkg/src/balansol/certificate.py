"""Dual certificates of configuration-LP infeasibility.

A pair (y, z) with z >= 0, y >= 0, z(C) <= y_v for every configuration C of
every vertex v at tau, and sum(y) < sum(z) shows that the LP is infeasible at
tau.  Builders turn a stuck local-search state into such a pair; the verifier
checks any pair from scratch.

The values are built on the instance normalized by tau.  Scaling weights and
tau together leaves every configuration set unchanged, so the same numbers
certify the original instance at the original tau.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import general
from .configlp import (
    Infeasible,
    InstanceTooLarge,
    OrientationError,
    configuration_edge_sets,
    default_cap,
    lp_feasible,
)
from .graph import Orientation, WeightedMultigraph, format_fraction, parse_fraction
from .params import GeneralParams, SimpleParams
from .search import REG, Done, SearchState, Stuck, _bits


class NotStuckError(ValueError):
    """A certificate was requested from a state that can still move."""


@dataclass(frozen=True)
class VertexBreakdown:
    base: Fraction
    a: Fraction
    b: Fraction
    mu: Fraction

    @property
    def total(self) -> Fraction:
        return self.base + self.a + self.b - self.mu


@dataclass(frozen=True)
class DualCertificate:
    tau: Fraction
    z: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    mode: str = "custom"
    params: dict = field(default_factory=dict)
    breakdown: tuple[VertexBreakdown, ...] | None = None

    def objective(self) -> Fraction:
        return sum(self.y, Fraction(0)) - sum(self.z, Fraction(0))

    def to_json(self) -> str:
        doc = {
            "mode": self.mode,
            "tau": format_fraction(self.tau),
            "params": {k: format_fraction(v) for k, v in self.params.items()},
            "z": [format_fraction(x) for x in self.z],
            "y": [format_fraction(x) for x in self.y],
        }
        if self.breakdown is not None:
            doc["breakdown"] = [
                {k: format_fraction(getattr(bd, k)) for k in ("base", "a", "b", "mu")}
                for bd in self.breakdown
            ]
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "DualCertificate":
        doc = json.loads(text)
        bd = doc.get("breakdown")
        return cls(
            tau=parse_fraction(doc["tau"]),
            z=tuple(parse_fraction(x) for x in doc["z"]),
            y=tuple(parse_fraction(x) for x in doc["y"]),
            mode=doc.get("mode", "custom"),
            params={k: parse_fraction(v) for k, v in doc.get("params", {}).items()},
            breakdown=None if bd is None else tuple(
                VertexBreakdown(*(parse_fraction(d[k]) for k in ("base", "a", "b", "mu")))
                for d in bd
            ),
        )


@dataclass(frozen=True)
class Accept:
    sum_y: Fraction
    sum_z: Fraction

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Reject:
    reason: str
    vertex: int | None = None
    edges: tuple[int, ...] = ()
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def __bool__(self):
        return False


# -- verification ------------------------------------------------------------------


def verify(g: WeightedMultigraph, cert: DualCertificate, cap: int | None = None) -> Accept | Reject:
    """Check a certificate against the dual constraints at ``cert.tau``.

    Only inclusion-maximal configurations are checked; with z >= 0 every
    other configuration has a smaller z-sum than some maximal one.
    """
    cap = default_cap() if cap is None else cap
    if len(cert.z) != g.edge_count or len(cert.y) != g.vertex_count:
        return Reject("certificate does not match the instance size")
    for e, ze in enumerate(cert.z):
        if ze < 0:
            return Reject("negative z", edges=(e,), lhs=ze, rhs=Fraction(0))
    for v, yv in enumerate(cert.y):
        if yv < 0:
            return Reject("negative y", vertex=v, lhs=yv, rhs=Fraction(0))
    den = math.lcm(1, *(x.denominator for x in cert.z + cert.y))
    zi = [int(x * den) for x in cert.z]
    yi = [int(x * den) for x in cert.y]
    for v in range(g.vertex_count):
        for es in configuration_edge_sets(g, v, cert.tau, True, cap):
            tot = sum(zi[e] for e in es)
            if tot > yi[v]:
                return Reject(
                    "configuration outweighs y", vertex=v, edges=es,
                    lhs=Fraction(tot, den), rhs=cert.y[v],
                )
    sy, sz = sum(cert.y, Fraction(0)), sum(cert.z, Fraction(0))
    if not sy < sz:
        return Reject("objective not negative", lhs=sy, rhs=sz)
    return Accept(sy, sz)


def heavy_edge_certificate(g: WeightedMultigraph, tau) -> DualCertificate | None:
    """z = 1 on edges heavier than tau, all else 0.

    Such an edge is in no configuration, so every constraint reads 0 <= y_v
    while the objective is minus the number of heavy edges.
    """
    tau = Fraction(tau)
    z = tuple(Fraction(1 if e.weight > tau else 0) for e in g.edges)
    if not any(z):
        return None
    return DualCertificate(tau, z, (Fraction(0),) * g.vertex_count, mode="heavy-edge")


def naive_certificate(g: WeightedMultigraph, o: Orientation, tau) -> DualCertificate:
    """z_e = w(e) and y_v = z(δ⁻(v)); the first thing one might try."""
    z = tuple(e.weight for e in g.edges)
    y = [Fraction(0)] * g.vertex_count
    for e, t in enumerate(o.targets):
        y[t] += z[e]
    return DualCertificate(Fraction(tau), z, tuple(y), mode="naive")


# -- construction ---------------------------------------------------------------------


def _require_stuck(state: SearchState, mode: str) -> None:
    if state.mode != mode:
        raise ValueError(f"expected a {mode} state, got {state.mode}")
    if state.nbad == 0:
        raise NotStuckError("no bad vertex: the run is done, not stuck")
    if state.next_action() is not None:
        raise NotStuckError("the state still has a valid flip or an addable edge")


def _assemble(state: SearchState, z: list[Fraction], a: list[Fraction], b: list[Fraction],
              params) -> DualCertificate:
    rows = []
    for v in range(state.n):
        base = sum((z[e] for e in _bits(state.inmask[v])), Fraction(0))
        mu = params.mu if state.is_bad(v) else Fraction(0)
        rows.append(VertexBreakdown(base, a[v], b[v], mu))
    return DualCertificate(
        tau=state.tau,
        z=tuple(z),
        y=tuple(r.total for r in rows),
        mode=state.mode,
        params={"R": params.R, "beta": params.beta, "mu": params.mu},
        breakdown=tuple(rows),
    )


def _amortize_critical(state: SearchState, tiny_targets: set[int], beta: Fraction) -> list[Fraction]:
    crit = state.critical_vertices()
    a = [Fraction(0)] * state.n
    for v in range(state.n):
        if state.is_bad(v):
            continue
        if v in tiny_targets:
            a[v] = -(beta - 1)
        elif v in crit:
            a[v] = beta - 1
    return a


def build_simple(g: WeightedMultigraph, state: SearchState, params: SimpleParams | None = None
                 ) -> DualCertificate:
    params = params or state.params
    _require_stuck(state, "simple")
    R, beta = params.R, params.beta
    et = state.tilde()
    z = []
    for e in range(state.m):
        w = state.norm[e]
        if not et >> e & 1:
            z.append(Fraction(0))
        elif w == 1:
            z.append(Fraction(1))
        elif w > 1 - R:
            z.append(w)
        else:
            z.append(beta * w)
    tiny_targets = {state.source(e) for e, _ in state.P if state.norm[e] <= 1 - R}
    a = _amortize_critical(state, tiny_targets, beta)
    b = [Fraction(0)] * state.n
    for e in _bits(state.F_mask()):
        b[state.source(e)] += 1 - R
        b[state.target[e]] -= 1 - R
    return _assemble(state, z, a, b, params)


def build_general(g: WeightedMultigraph, state: SearchState, params: GeneralParams | None = None
                  ) -> DualCertificate:
    params = params or state.params
    _require_stuck(state, "general")
    R, beta = params.R, params.beta
    third, half = Fraction(1, 3), Fraction(1, 2)
    et = state.tilde()
    F = state.F_mask()
    Q = state.q_all()
    z = []
    for e in range(state.m):
        w = state.norm[e]
        if not et >> e & 1:
            z.append(Fraction(0))
        elif w > half:
            z.append(Fraction(1) if (F >> e & 1 and e not in Q) else min(w, R))
        elif w > third:
            z.append(w)
        else:
            z.append(beta * w)
    tiny_targets = {state.source(e) for e, k in state.P if k == REG and state.norm[e] <= third}
    a = _amortize_critical(state, tiny_targets, beta)
    b = [Fraction(0)] * state.n
    for e in _bits(F):
        s, t = state.source(e), state.target[e]
        b[s] += 1 - R
        b[t] -= 1 - R
        if e in Q:
            b[s] -= R - state.norm[e]
            b[t] += R - state.norm[e]
    return _assemble(state, z, a, b, params)


def build(g: WeightedMultigraph, state: SearchState) -> DualCertificate:
    return build_simple(g, state) if state.mode == "simple" else build_general(g, state)


# -- driver -------------------------------------------------------------------------------


@dataclass
class Certificate:
    certificate: DualCertificate
    verdict: Accept
    state: SearchState | None = field(repr=False)

    outcome = "certificate"


@dataclass
class NoneFound:
    reason: str
    done: Done | None = None
    rejected: DualCertificate | None = None
    verdict: Reject | None = None
    state: SearchState | None = field(default=None, repr=False)

    outcome = "none"


def certify_infeasibility(
    g: WeightedMultigraph,
    tau,
    cap: int | None = None,
    iteration_cap: int = 1_000_000,
    params: GeneralParams | None = None,
    orientation: Orientation | None = None,
    check: bool = True,
) -> Certificate | NoneFound:
    """Run the general search at tau and turn a stuck state into a verified certificate."""
    tau = Fraction(tau)
    heavy = heavy_edge_certificate(g, tau)
    if heavy is not None:
        return Certificate(heavy, verify(g, heavy, cap), None)
    if orientation is None:
        try:
            orientation = general.starting_orientation(g, tau, cap)
        except OrientationError as exc:
            return NoneFound(f"no starting orientation: {exc}")
    res = general.run_general(g, tau, iteration_cap, orientation, params, check)
    if isinstance(res, Done):
        return NoneFound("search finished: no certificate", done=res, state=res.state)
    if not isinstance(res, Stuck):
        return NoneFound(f"iteration cap {iteration_cap} reached", state=res.state)
    cert = build_general(g, res.state, params)
    verdict = verify(g, cert, cap)
    if not verdict:
        return NoneFound("built certificate was rejected", rejected=cert, verdict=verdict,
                         state=res.state)
    return Certificate(cert, verdict, res.state)


def cross_check(g: WeightedMultigraph, cert: DualCertificate, cap: int | None = None) -> bool:
    """True when verify and the LP agree about infeasibility at cert.tau."""
    accepted = bool(verify(g, cert, cap))
    infeasible = isinstance(lp_feasible(g, cert.tau, cap), Infeasible)
    return accepted == infeasible if accepted else True


__all__ = [
    "Accept",
    "Certificate",
    "DualCertificate",
    "InstanceTooLarge",
    "NoneFound",
    "NotStuckError",
    "Reject",
    "VertexBreakdown",
    "build",
    "build_general",
    "build_simple",
    "certify_infeasibility",
    "cross_check",
    "heavy_edge_certificate",
    "naive_certificate",
    "verify",
]
