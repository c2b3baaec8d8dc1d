"""Formula syntax trees for discrete-time signal temporal logic.

The core connectives are truth, named predicates, negation, conjunction and
the two until operators (future and past), each until carrying an integer
time window.  Disjunction, eventually and always (future and past variants)
are provided as first-class nodes and defined by :func:`desugar` in terms of
the core.  Formula values are immutable and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import IntervalError

__all__ = [
    "TimeInterval",
    "TrueFormula",
    "TRUE",
    "Predicate",
    "Not",
    "And",
    "Or",
    "UntilFuture",
    "UntilPast",
    "EventuallyFuture",
    "AlwaysFuture",
    "EventuallyPast",
    "AlwaysPast",
    "Formula",
    "Horizon",
    "desugar",
    "horizon",
    "predicate_names",
]


@dataclass(frozen=True)
class TimeInterval:
    """Closed window [lo, hi] of integer time steps; ``hi`` may be math.inf.

    Unbounded windows are representable but rejected by evaluation on finite
    traces, since no finite trace can cover them.
    """

    lo: int
    hi: Union[int, float]

    def __post_init__(self):
        if not isinstance(self.lo, int) or isinstance(self.lo, bool):
            raise IntervalError(f"interval lower bound must be an integer, got {self.lo!r}")
        if self.lo < 0:
            raise IntervalError(f"interval bounds must be non-negative, got lo={self.lo}")
        if self.hi != math.inf:
            if not isinstance(self.hi, int) or isinstance(self.hi, bool):
                raise IntervalError(f"interval upper bound must be an integer or inf, got {self.hi!r}")
            if self.hi < 0:
                raise IntervalError(f"interval bounds must be non-negative, got hi={self.hi}")
        if self.lo > self.hi:
            raise IntervalError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @property
    def bounded(self) -> bool:
        return self.hi != math.inf

    def __str__(self) -> str:
        hi = "inf" if not self.bounded else str(self.hi)
        return f"[{self.lo},{hi}]"


@dataclass(frozen=True)
class TrueFormula:
    """The formula that every signal satisfies at every time."""


@dataclass(frozen=True)
class Predicate:
    """Reference to a named predicate, resolved against a predicate table."""

    name: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class UntilFuture:
    left: "Formula"
    right: "Formula"
    interval: TimeInterval


@dataclass(frozen=True)
class UntilPast:
    left: "Formula"
    right: "Formula"
    interval: TimeInterval


@dataclass(frozen=True)
class EventuallyFuture:
    child: "Formula"
    interval: TimeInterval


@dataclass(frozen=True)
class AlwaysFuture:
    child: "Formula"
    interval: TimeInterval


@dataclass(frozen=True)
class EventuallyPast:
    child: "Formula"
    interval: TimeInterval


@dataclass(frozen=True)
class AlwaysPast:
    child: "Formula"
    interval: TimeInterval


Formula = Union[
    TrueFormula,
    Predicate,
    Not,
    And,
    Or,
    UntilFuture,
    UntilPast,
    EventuallyFuture,
    AlwaysFuture,
    EventuallyPast,
    AlwaysPast,
]

TRUE = TrueFormula()


def desugar(f: Formula) -> Formula:
    """Rewrite a formula into the core connectives only.

    Or(a, b)            -> Not(And(Not(a), Not(b)))
    EventuallyFuture(c) -> UntilFuture(TRUE, c)
    AlwaysFuture(c)     -> Not(UntilFuture(TRUE, Not(c)))
    and the past variants symmetrically.  The result evaluates identically
    to the input on every trace and time; desugar is idempotent.
    """
    match f:
        case TrueFormula() | Predicate():
            return f
        case Not(child):
            return Not(desugar(child))
        case And(left, right):
            return And(desugar(left), desugar(right))
        case Or(left, right):
            return Not(And(Not(desugar(left)), Not(desugar(right))))
        case UntilFuture(left, right, interval):
            return UntilFuture(desugar(left), desugar(right), interval)
        case UntilPast(left, right, interval):
            return UntilPast(desugar(left), desugar(right), interval)
        case EventuallyFuture(child, interval):
            return UntilFuture(TRUE, desugar(child), interval)
        case AlwaysFuture(child, interval):
            return Not(UntilFuture(TRUE, Not(desugar(child)), interval))
        case EventuallyPast(child, interval):
            return UntilPast(TRUE, desugar(child), interval)
        case AlwaysPast(child, interval):
            return Not(UntilPast(TRUE, Not(desugar(child)), interval))
    raise TypeError(f"not a formula node: {f!r}")


@dataclass(frozen=True)
class Horizon:
    """Maximal temporal reach of a formula, in steps from the anchor time.

    Evaluating a formula at time t touches only trace states in
    [t - past_depth, t + future_depth].  Depths are math.inf when the
    corresponding operators carry unbounded windows.
    """

    future_depth: Union[int, float]
    past_depth: Union[int, float]


def horizon(f: Formula) -> Horizon:
    """Nesting sum of window upper bounds along the deepest syntactic path."""
    match f:
        case TrueFormula() | Predicate():
            return Horizon(0, 0)
        case Not(child):
            return horizon(child)
        case And(left, right) | Or(left, right):
            hl, hr = horizon(left), horizon(right)
            return Horizon(max(hl.future_depth, hr.future_depth), max(hl.past_depth, hr.past_depth))
        case UntilFuture(left, right, interval):
            hl, hr = horizon(left), horizon(right)
            return Horizon(
                interval.hi + max(hl.future_depth, hr.future_depth),
                max(hl.past_depth, hr.past_depth),
            )
        case UntilPast(left, right, interval):
            hl, hr = horizon(left), horizon(right)
            return Horizon(
                max(hl.future_depth, hr.future_depth),
                interval.hi + max(hl.past_depth, hr.past_depth),
            )
        case EventuallyFuture(child, interval) | AlwaysFuture(child, interval):
            hc = horizon(child)
            return Horizon(interval.hi + hc.future_depth, hc.past_depth)
        case EventuallyPast(child, interval) | AlwaysPast(child, interval):
            hc = horizon(child)
            return Horizon(hc.future_depth, interval.hi + hc.past_depth)
    raise TypeError(f"not a formula node: {f!r}")


def predicate_names(f: Formula) -> frozenset:
    """All predicate names referenced anywhere in the formula."""
    match f:
        case TrueFormula():
            return frozenset()
        case Predicate(name):
            return frozenset((name,))
        case Not(child) | EventuallyFuture(child, _) | AlwaysFuture(child, _) | EventuallyPast(child, _) | AlwaysPast(child, _):
            return predicate_names(child)
        case And(left, right) | Or(left, right) | UntilFuture(left, right, _) | UntilPast(left, right, _):
            return predicate_names(left) | predicate_names(right)
    raise TypeError(f"not a formula node: {f!r}")
