"""Exact phase-one simplex on integer data.

The tableau is kept fraction-free: every entry is an integer and the true
tableau is ``M / d`` where ``d`` is the last pivot element (the determinant
of the current basis).  Each pivot updates ``M[i] <- (M[i]*p - M[i][j]*M[r]) / d``
and the division is exact.  Bland's rule is used for both the entering and
the leaving variable, so the method cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass
class PhaseOneResult:
    feasible: bool
    x: list[Fraction] | None
    pivots: int


def phase_one(
    A: Sequence[Sequence[int]],
    senses: Sequence[str],
    b: Sequence[int],
    max_pivots: int = 1_000_000,
) -> PhaseOneResult:
    """Find ``x >= 0`` with ``A x (sense) b`` for integer ``A``, ``b``.

    ``senses`` entries are ``"<="``, ``">="`` or ``"="``.  Returns the basic
    feasible solution reached by phase one, or ``feasible=False``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows: list[list[int]] = []
    sense: list[str] = []
    rhs: list[int] = []
    for i in range(m):
        row, s, bi = list(A[i]), senses[i], b[i]
        if len(row) != n:
            raise ValueError("ragged constraint matrix")
        if s not in ("<=", ">=", "="):
            raise ValueError(f"bad sense {s!r}")
        if bi < 0:
            row = [-a for a in row]
            bi = -bi
            s = {"<=": ">=", ">=": "<=", "=": "="}[s]
        rows.append(row)
        sense.append(s)
        rhs.append(bi)

    # column layout: structural | one slack/surplus per inequality row | artificials
    n_slack = sum(1 for s in sense if s != "=")
    n_art = sum(1 for s in sense if s != "<=")
    width = n + n_slack + n_art
    M = [[0] * (width + 1) for _ in range(m + 1)]  # last row is the objective
    basis = [0] * m
    art_cols: set[int] = set()
    si, ai = n, n + n_slack
    for i in range(m):
        M[i][:n] = rows[i]
        M[i][width] = rhs[i]
        if sense[i] == "<=":
            M[i][si] = 1
            basis[i] = si
            si += 1
        else:
            if sense[i] == ">=":
                M[i][si] = -1
                si += 1
            M[i][ai] = 1
            basis[i] = ai
            art_cols.add(ai)
            ai += 1

    obj = M[m]
    for c in art_cols:
        obj[c] = 1
    for i in range(m):
        if basis[i] in art_cols:
            Mi = M[i]
            for k in range(width + 1):
                obj[k] -= Mi[k]

    d = 1
    pivots = 0
    while True:
        enter = -1
        for j in range(width):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best_num = best_den = 0
        for i in range(m):
            a = M[i][enter]
            if a > 0:
                num = M[i][width]
                if leave < 0:
                    leave, best_num, best_den = i, num, a
                    continue
                lhs, rhs_cmp = num * best_den, best_num * a
                if lhs < rhs_cmp or (lhs == rhs_cmp and basis[i] < basis[leave]):
                    leave, best_num, best_den = i, num, a
        if leave < 0:  # cannot happen in phase one: objective is bounded below by 0
            raise RuntimeError("phase-one objective unbounded")
        p = M[leave][enter]
        Mr = M[leave]
        for i in range(m + 1):
            if i == leave:
                continue
            Mi = M[i]
            f = Mi[enter]
            if f == 0:
                if p != d:
                    for k in range(width + 1):
                        if Mi[k]:
                            Mi[k] = Mi[k] * p // d
            else:
                for k in range(width + 1):
                    Mi[k] = (Mi[k] * p - f * Mr[k]) // d
        d = p
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")

    if obj[width] != 0:
        return PhaseOneResult(False, None, pivots)
    x = [Fraction(0)] * n
    for i, col in enumerate(basis):
        if col < n:
            x[col] = Fraction(M[i][width], d)
    _check_solution(rows, sense, rhs, x)
    return PhaseOneResult(True, x, pivots)


def _check_solution(rows, sense, rhs, x) -> None:
    for row, s, bi in zip(rows, sense, rhs):
        lhs = sum((a * xi for a, xi in zip(row, x) if a), Fraction(0))
        ok = lhs <= bi if s == "<=" else lhs >= bi if s == ">=" else lhs == bi
        if not ok or any(xi < 0 for xi in x):
            raise RuntimeError("simplex produced an infeasible point")
