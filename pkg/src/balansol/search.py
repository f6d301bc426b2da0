"""Shared engine for both local-search variants.

Weights are normalized by tau and then scaled to integers so that every
constant the rules compare against (1+R, the tiny cut, 1/2, 0.6) is an
integer too.  Edge sets are int bitmasks over edge ids.  The repel relation
is stored per prefix as one mask per vertex.

Prefix ``k`` of the relation depends only on ``P[:k]`` and the current
orientation.  Appending therefore computes a single new prefix, while
executing a flip rebuilds prefixes ``0..k`` from scratch.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .graph import Orientation, WeightedMultigraph, format_fraction
from .params import GeneralParams, SimpleParams

RAW = "raw"
REG = "regular"


class InvariantViolation(AssertionError):
    """A property the analysis guarantees failed during a checked run."""


class ModeError(ValueError):
    """The instance violates the weight restriction of the simple variant."""


@dataclass
class Done:
    orientation: Orientation
    makespan: Fraction
    iterations: int
    state: "SearchState" = field(repr=False)

    outcome = "done"


@dataclass
class Stuck:
    state: "SearchState" = field(repr=False)
    iterations: int = 0

    outcome = "stuck"


@dataclass
class CapExceeded:
    state: "SearchState" = field(repr=False)
    iterations: int = 0

    outcome = "cap"


def _popcount(x: int) -> int:
    return x.bit_count()


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class SearchState:
    """Orientation, pending flips, Q sets and the cached repel relation."""

    def __init__(
        self,
        g: WeightedMultigraph,
        tau,
        params: SimpleParams | GeneralParams,
        orientation: Orientation,
        check: bool = True,
        trace: Callable[[dict], None] | None = None,
    ):
        tau = Fraction(tau)
        if tau <= 0 and g.edges:
            raise ValueError("tau must be positive")
        orientation.validate(g)
        self.g = g
        self.tau = tau
        self.params = params
        self.mode = params.mode
        self.check = check
        self.trace = trace
        self.initial = orientation

        # integer weights on a common grid: W[e] / S == w(e) / tau
        consts = [params.R, params.tiny_cut, params.critical_cut, Fraction(1, 2), Fraction(3, 5)]
        if g.edges:
            d = g.weight_denominator()
            num = [e.weight.numerator * (d // e.weight.denominator) * tau.denominator
                   for e in g.edges]
            den = d * tau.numerator
            S = math.lcm(*(den // math.gcd(x, den) for x in num), *(c.denominator for c in consts))
            self.W = [x * S // den for x in num]
        else:
            S = 1
            self.W = []
        self.S = S
        self.bound = int((1 + params.R) * S)
        self.tiny_cut = int(params.tiny_cut * S)
        self.crit_cut = int(params.critical_cut * S)
        self.half = S // 2
        self.q_hi = int(Fraction(3, 5) * S)
        self.R_int = int(params.R * S)

        n, m = g.vertex_count, g.edge_count
        self.n, self.m = n, m
        self.eu = [e.u for e in g.edges]
        self.ev = [e.v for e in g.edges]
        self.inc = [0] * n
        self.loops_at = [0] * n
        self.loopmask = 0
        for i, e in enumerate(g.edges):
            self.inc[e.u] |= 1 << i
            self.inc[e.v] |= 1 << i
            if e.u == e.v:
                self.loops_at[e.u] |= 1 << i
                self.loopmask |= 1 << i
        self.bigmask = sum(1 << i for i in range(m) if self.W[i] > self.half)
        self.tinymask = sum(1 << i for i in range(m) if self.W[i] <= self.tiny_cut)
        self.order = sorted(range(m), key=lambda e: (self.W[e], e))

        self.target = list(orientation.targets)
        self.load = [0] * n
        self.inmask = [0] * n
        for e, t in enumerate(self.target):
            self.load[t] += self.W[e]
            self.inmask[t] |= 1 << e
        self.nbad = sum(1 for v in range(n) if self.load[v] > self.bound)

        self.P: list[tuple[int, str]] = []
        self.pset: set[tuple[int, str]] = set()
        self.Q: list[set[int]] = [set()]
        self.rep: list[list[int]] = []
        self.et: list[int] = []
        self.w0: list[int | None] = []
        self.crit: list[int] = []
        self.steps = 0
        self._rebuild(0)
        self._potential = self.potential()

    # -- basic accessors ---------------------------------------------------

    def source(self, e: int) -> int:
        return self.eu[e] + self.ev[e] - self.target[e]

    def outmask(self, v: int) -> int:
        return (self.inc[v] & ~self.inmask[v]) | self.loops_at[v]

    def is_bad(self, v: int) -> bool:
        return self.load[v] > self.bound

    def repels(self, v: int, e: int, k: int | None = None) -> bool:
        row = self.rep[-1 if k is None else k]
        return bool(row[v] >> e & 1)

    def orientation(self) -> Orientation:
        return Orientation(tuple(self.target))

    def tilde(self, k: int | None = None) -> int:
        return self.et[-1 if k is None else k]

    def original_load(self, v: int) -> Fraction:
        return Fraction(self.load[v], self.S) * self.tau

    def makespan(self) -> Fraction:
        return Fraction(max(self.load, default=0), self.S) * self.tau

    @functools.cached_property
    def norm(self) -> list[Fraction]:
        """Weights divided by tau."""
        return [Fraction(w, self.S) for w in self.W]

    # -- repel relation --------------------------------------------------------

    def _prefix0(self) -> tuple[list[int], int]:
        row = []
        et = 0
        for v in range(self.n):
            r = self.inc[v] if self.load[v] > self.bound else self.loops_at[v]
            row.append(r)
            et |= r & self.outmask(v)
        return row, et

    def compute_w0(self, k: int, et_prev: int | None = None) -> int:
        """Integer W0 for the regular flip ``P[k-1]`` given prefix ``k-1``."""
        e = self.P[k - 1][0]
        x = self.source(e)
        et = self.et[k - 1] if et_prev is None else et_prev
        we = self.W[e]
        inx = self.inmask[x]
        fixed = 0
        loose: list[int] = []
        for f in _bits(inx):
            if et >> f & 1:
                fixed += self.W[f]
            else:
                loose.append(self.W[f])
        cands = sorted({w for w in loose if w <= we} | {we}, reverse=True)
        for c in cands:
            tot = fixed + sum(w for w in loose if w >= c)
            if tot + we > self.bound:
                return c
        return 0

    def _extend(self, k: int, row: list[int], et: int) -> tuple[list[int], int, int | None, int]:
        """Prefix ``k`` from prefix ``k-1`` (given as ``row``, ``et``)."""
        e, kind = self.P[k - 1]
        x = self.source(e)
        W = self.W
        row = list(row)
        w0: int | None = None
        crit = -1
        if kind == RAW:
            add = self.inc[x] & self.bigmask
            for f in _bits(self.inc[x]):
                if W[f] >= W[e]:
                    add |= 1 << f
        else:
            w0 = self.compute_w0(k, et)
            if w0 > self.crit_cut:
                add = 0
                for f in _bits(self.inc[x]):
                    if et >> f & 1 or W[f] >= w0:
                        add |= 1 << f
            else:
                add = self.inc[x]
                crit = x
        row[x] |= add
        et |= row[x] & self.outmask(x)
        return row, et, w0, crit

    def _rebuild(self, upto: int) -> None:
        row, et = self._prefix0()
        self.rep, self.et, self.w0, self.crit = [row], [et], [None], [-1]
        for k in range(1, upto + 1):
            row, et, w0, c = self._extend(k, row, et)
            self.rep.append(row)
            self.et.append(et)
            self.w0.append(w0)
            self.crit.append(c)

    def critical_vertices(self) -> set[int]:
        return {c for c in self.crit if c >= 0}

    # -- derived sets -------------------------------------------------------------

    def edges_in_P(self) -> int:
        mask = 0
        for e, _ in self.P:
            mask |= 1 << e
        return mask

    def q_all(self) -> set[int]:
        out: set[int] = set()
        for q in self.Q:
            out |= q
        return out

    def F_mask(self) -> int:
        """Simple mode: every big flip.  General mode: big flips in P with no
        strictly lighter flip toward the same vertex."""
        if self.mode == "simple":
            return self.edges_in_P() & self.bigmask
        best: dict[int, int] = {}
        for e, _ in self.P:
            s = self.source(e)
            if s not in best or self.W[e] < best[s]:
                best[s] = self.W[e]
        mask = 0
        for e, _ in self.P:
            if self.bigmask >> e & 1 and self.W[e] <= best[self.source(e)]:
                mask |= 1 << e
        return mask

    def H_mask(self) -> int:
        heavy = sum(1 << e for e in range(self.m) if self.W[e] > self.R_int)
        return heavy & ~self.F_mask()

    def potential(self) -> tuple[int, ...]:
        good = self.n - self.nbad
        return (good, *(_popcount(x) for x in self.et), -1)

    # -- moves --------------------------------------------------------------------

    def is_valid_flip(self, e: int) -> bool:
        return self.load[self.source(e)] + self.W[e] <= self.bound

    def _flip(self, e: int) -> None:
        t = self.target[e]
        s = self.source(e)
        w = self.W[e]
        was_bad = (self.load[t] > self.bound, self.load[s] > self.bound)
        self.load[t] -= w
        self.load[s] += w
        self.inmask[t] &= ~(1 << e)
        self.inmask[s] |= 1 << e
        self.target[e] = s
        now_bad = (self.load[t] > self.bound, self.load[s] > self.bound)
        self.nbad += sum(now_bad) - sum(was_bad)
        if self.check and now_bad[1] and not was_bad[1]:
            raise InvariantViolation(f"executing edge {e} made vertex {s} bad")

    def _emit(self, event: str, **kw) -> None:
        if self.trace is not None:
            rec = {"step": self.steps, "event": event, **kw, "prefix": len(self.P),
                   "potential": list(self.potential())}
            self.trace(rec)

    def _execute(self, j: int) -> None:
        e, kind = self.P[j]
        t = self.target[e]
        k = next((i for i in range(len(self.rep)) if self.rep[i][t] >> e & 1), None)
        if k is None or k > j:
            raise InvariantViolation(
                f"flip {e} at position {j + 1}: holder {t} does not repel it on any earlier prefix"
            )
        good_before = self.nbad
        old = [list(r) for r in self.rep[: k + 1]] if self.check else None
        self._flip(e)
        self.P = self.P[:k]
        self.pset = set(self.P)
        self.Q = self.Q[:k] + [set()]
        self._rebuild(k)
        self._emit("flip-executed", edge=e, kind=kind, target=self.target[e])
        self._emit("prefix-truncated", length=k)
        if self.check and old is not None and self.nbad == good_before:
            for i, prev in enumerate(old):
                for v in range(self.n):
                    if prev[v] & ~self.rep[i][v]:
                        raise InvariantViolation(
                            f"stability: vertex {v} lost repelled edges at prefix {i}"
                        )

    def _append(self, e: int, kind: str) -> None:
        if self.loopmask >> e & 1:
            raise InvariantViolation(f"loop {e} offered as a pending flip")
        self.P.append((e, kind))
        self.pset.add((e, kind))
        self.Q.append(set())
        row, et, w0, c = self._extend(len(self.P), self.rep[-1], self.et[-1])
        self.rep.append(row)
        self.et.append(et)
        self.w0.append(w0)
        self.crit.append(c)
        self._emit("flip-appended", edge=e, kind=kind)
        if self.check:
            if not row[self.source(e)] >> e & 1:
                raise InvariantViolation(f"new flip {e} not repelled by its target")
            ref = (self.rep, self.et)
            self._rebuild(len(self.P))
            if ref != (self.rep, self.et):
                raise InvariantViolation("incremental repel relation differs from recomputation")

    def push(self, e: int, kind: str = REG) -> None:
        """Append a pending flip without the addability test (hand-built states)."""
        if kind not in (RAW, REG):
            raise ValueError(f"unknown flip kind {kind!r}")
        if (e, kind) in self.pset:
            raise ValueError(f"({e}, {kind}) is already pending")
        self._append(e, kind)

    # -- addability -------------------------------------------------------------------

    def is_raw_addable(self, e: int) -> bool:
        """Repelled by the holder and not by the other endpoint, w.r.t. all of P."""
        if (e, RAW) in self.pset or (e, REG) in self.pset:
            return False
        row = self.rep[-1]
        return bool(row[self.target[e]] >> e & 1) and not row[self.source(e)] >> e & 1

    def is_regular_addable(self, e: int) -> bool:
        if (e, REG) in self.pset or (e, RAW) not in self.pset:
            return False
        W = self.W
        if W[e] <= self.tiny_cut:
            return True
        x = self.source(e)
        bin_ = self.inmask[x] & self.bigmask
        nb = _popcount(bin_)
        if W[e] <= self.half:
            if nb <= 1:
                return True
            return any(W[e] + W[f] <= self.S for f in _bits(bin_))
        if nb >= 2:
            return False
        if e in self.q_all():
            return True
        wb = sum(W[f] for f in _bits(bin_))
        qmask = sum(1 << f for f in self.q_all())
        return (
            wb <= self.R_int
            and bin_ & ~self.et[-1] == 0
            and bin_ & self.F_mask() & ~qmask == 0
        )

    def _simple_addable(self, e: int) -> bool:
        row = self.rep[-1]
        return bool(row[self.target[e]] >> e & 1) and not row[self.source(e)] >> e & 1

    def q_candidate(self, e: int, kind: str, qall: set[int]) -> bool:
        if kind != RAW or e in qall or not (self.half < self.W[e] <= self.q_hi):
            return False
        t = self.target[e]
        outs = self.rep[-1][t] & self.outmask(t) & ~self.loopmask
        return any(self.W[e] + self.W[f] <= self.S for f in _bits(outs))

    def update_q(self) -> list[int]:
        added = []
        while True:
            qall = self.q_all()
            hits = [e for e, kind in self.P if self.q_candidate(e, kind, qall)]
            if not hits:
                return added
            e = min(hits)
            self.Q[-1].add(e)
            added.append(e)
            self._emit("q-inserted", edge=e, index=len(self.P))

    # -- main loop ------------------------------------------------------------------

    def next_action(self) -> tuple | None:
        """("execute", j) or ("append", e, kind); None when neither move exists."""
        general = self.mode == "general"
        for j, (e, kind) in enumerate(self.P):
            if (kind == REG or not general) and self.is_valid_flip(e):
                return ("execute", j)
        in_p = self.edges_in_P()
        for e in self.order:
            if general:
                if self.is_raw_addable(e):
                    return ("append", e, RAW)
                if self.is_regular_addable(e):
                    return ("append", e, REG)
            elif not in_p >> e & 1 and self._simple_addable(e):
                return ("append", e, REG)
        return None

    def is_stuck(self) -> bool:
        return self.nbad > 0 and self.next_action() is None

    def step(self) -> str:
        """One iteration: 'done', 'stuck' or 'progress'."""
        if self.nbad == 0:
            self._emit("done")
            return "done"
        act = self.next_action()
        if act is None:
            self._emit("stuck")
            return "stuck"
        self.steps += 1
        if act[0] == "execute":
            self._execute(act[1])
        else:
            self._append(act[1], act[2])
        if self.mode == "general":
            self.update_q()
        if self.check:
            self._check_step()
        return "progress"

    def _check_step(self) -> None:
        pot = self.potential()
        if not pot > self._potential:
            raise InvariantViolation(f"potential did not increase: {self._potential} -> {pot}")
        self._potential = pot
        if self.mode == "general":
            self.check_big_invariant()

    def check_big_invariant(self) -> None:
        for v in range(self.n):
            if _popcount(self.inmask[v] & self.bigmask) > 2:
                raise InvariantViolation(f"vertex {v} holds three big edges")

    def run(self, iteration_cap: int = 1_000_000):
        while True:
            r = self.step()
            if r == "done":
                o = self.orientation()
                return Done(o, self.makespan(), self.steps, self)
            if r == "stuck":
                return Stuck(self, self.steps)
            if self.steps >= iteration_cap:
                return CapExceeded(self, self.steps)

    # -- exports -------------------------------------------------------------------

    def describe(self) -> dict:
        return {
            "tau": format_fraction(self.tau),
            "orientation": list(self.target),
            "pending": [[e, k] for e, k in self.P],
            "q": [sorted(q) for q in self.Q],
        }


def big_counts_ok(g: WeightedMultigraph, o: Orientation, tau) -> bool:
    half = Fraction(tau) / 2
    cnt = [0] * g.vertex_count
    for e, t in enumerate(o.targets):
        if g.weight(e) > half:
            cnt[t] += 1
    return all(c <= 2 for c in cnt)


def replay(g: WeightedMultigraph, initial: Orientation, events) -> tuple[Orientation, list]:
    """Rebuild the final orientation and pending list from trace events."""
    target = list(initial.targets)
    P: list[tuple[int, str]] = []
    for ev in events:
        kind = ev["event"]
        if kind == "flip-appended":
            P.append((ev["edge"], ev["kind"]))
        elif kind == "flip-executed":
            e = ev["edge"]
            target[e] = g.other(e, target[e])
            if target[e] != ev["target"]:
                raise ValueError(f"trace disagrees at flip of edge {e}")
        elif kind == "prefix-truncated":
            del P[ev["length"]:]
    return Orientation(tuple(target)), P
