"""Constants of the two local-search variants and the inequalities they must satisfy.

The dual constructions only go through when ``(R, beta, mu)`` satisfy a
list of linear inequalities.  Both parameter classes check that list on
construction, so a bad choice fails before any search starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

F = Fraction


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: Fraction
    rhs: Fraction
    strict: bool = False

    @property
    def holds(self) -> bool:
        return self.lhs > self.rhs if self.strict else self.lhs >= self.rhs


def _validate(checks: list[Inequality]) -> None:
    bad = [c for c in checks if not c.holds]
    if bad:
        detail = "; ".join(f"{c.name} ({c.lhs} vs {c.rhs})" for c in bad)
        raise ParameterError(f"constant inequalities violated: {detail}")


@dataclass(frozen=True)
class SimpleParams:
    R: Fraction = F(74, 100)
    beta: Fraction = F(11, 10)
    mu: Fraction = F(1, 100)
    validate: bool = field(default=True, compare=False, repr=False)

    mode = "simple"

    def __post_init__(self):
        if self.validate:
            _validate(self.inequalities())

    @property
    def tiny_cut(self) -> Fraction:
        return 1 - self.R

    @property
    def critical_cut(self) -> Fraction:
        return 1 - self.R

    def inequalities(self) -> list[Inequality]:
        R, b, mu = self.R, self.beta, self.mu
        return [
            Inequality("bad vertex: 2R - mu >= beta", 2 * R - mu, b),
            Inequality("tiny-flip target: 3R - 2beta >= 0", 3 * R - 2 * b, F(0)),
            Inequality("small flip, one F edge: beta(R - 1/2) >= 1 - R", b * (R - F(1, 2)), 1 - R),
            Inequality("two small edges: 2 - beta >= 0", 2 - b, F(0)),
            Inequality("three small edges: 3 - 2beta >= 0", 3 - 2 * b, F(0)),
            Inequality("small flip, no F edge: 1 + R - 1/2 >= 1", 1 + R - F(1, 2), F(1)),
            Inequality("mu > 0", mu, F(0), strict=True),
            Inequality("beta >= 1", b, F(1)),
        ]


@dataclass(frozen=True)
class GeneralParams:
    R: Fraction = F(749, 1000)
    beta: Fraction = F(103, 100)
    mu: Fraction = F(1, 100)
    validate: bool = field(default=True, compare=False, repr=False)

    mode = "general"

    def __post_init__(self):
        if self.validate:
            _validate(self.inequalities())

    @property
    def tiny_cut(self) -> Fraction:
        return F(1, 3)

    @property
    def critical_cut(self) -> Fraction:
        return F(1, 3)

    def inequalities(self) -> list[Inequality]:
        R, b, mu = self.R, self.beta, self.mu
        half, third = F(1, 2), F(1, 3)
        return [
            Inequality("bad vertex: 2R - mu >= beta", 2 * R - mu, b),
            Inequality("tiny-flip target: 2R + 2/3 - beta >= beta + (beta - 1)",
                       2 * R + 2 * third - b, b + (b - 1)),
            Inequality("Q edge on small target: 3R - 1.1 >= beta", 3 * R - F(11, 10), b),
            Inequality("beta(R - 1/2) >= 1 - R", b * (R - half), 1 - R),
            Inequality("two big, tiny target, Q pair: R + 2/3 - beta + 4R - 2.2 >= beta",
                       R + 2 * third - b + 4 * R - F(22, 10), b),
            Inequality("two big, tiny target, no Q: 2R + 1 - beta >= beta", 2 * R + 1 - b, b),
            Inequality("two big, tiny target, no Q: 2R + 1 - beta >= 0.4beta + 1",
                       2 * R + 1 - b, F(2, 5) * b + 1),
            Inequality("small target, no big: R + 1/2 >= beta", R + half, b),
            Inequality("critical small target with F: 2R - 1.5 + beta >= 0.5 + 0.5beta",
                       2 * R - F(3, 2) + b, half + half * b),
            Inequality("critical small target: R + beta(R - 1/2) >= 1", R + b * (R - half), F(1)),
            Inequality("two big, bad vertex: 3R - 1 - mu >= beta", 3 * R - 1 - mu, b),
            Inequality("two big, tiny target, one heavy: 4R + 2/3 - 1.6 - beta >= beta",
                       4 * R + 2 * third - F(16, 10) - b, b),
            Inequality("two big, small target, Q pair: 5R - 2.7 >= beta", 5 * R - F(27, 10), b),
            Inequality("two big, small target: 3R - 1 >= beta", 3 * R - 1, b),
            Inequality("two big, small target: 3R - 2/3 >= 1 + 0.4beta",
                       3 * R - 1 + third, 1 + F(2, 5) * b),
            Inequality("two big, small target: 3R - 1 + beta(R - 0.6) >= 1.4",
                       3 * R - 1 + b * (R - F(3, 5)), F(7, 5)),
            Inequality("two big, small target: 2R >= 1.4", 2 * R, F(7, 5)),
            Inequality("critical, two big, Q: 4R - 3 + beta >= 0.5 + 0.5beta",
                       4 * R - 3 + b, half + half * b),
            Inequality("critical, two big, Q: 3R - 2 >= 0", 3 * R - 2, F(0)),
            Inequality("two heavy big: 2R >= 1 + 0.4beta", 2 * R, 1 + F(2, 5) * b),
            Inequality("Q band below R: R > 0.6", R, F(3, 5), strict=True),
            Inequality("beta >= 1", b, F(1)),
            Inequality("mu > 0", mu, F(0), strict=True),
        ]


_DEFAULTS: dict[str, SimpleParams | GeneralParams] = {}


def default_params(mode: str) -> SimpleParams | GeneralParams:
    """Shared default constants per mode (validated once)."""
    if mode not in _DEFAULTS:
        if mode == "simple":
            _DEFAULTS[mode] = SimpleParams()
        elif mode == "general":
            _DEFAULTS[mode] = GeneralParams()
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return _DEFAULTS[mode]
