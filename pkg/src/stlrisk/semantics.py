"""Boolean and quantitative (robust) evaluation of formulas over traces.

Both evaluators follow the same inductive scheme.  The quantitative value of
truth is +inf, a predicate contributes its signed distance, negation flips
the sign, conjunction takes the minimum, and an until node takes the best
window candidate::

    until(left, right, [lo, hi]) at t
        = sup over t'' in the window of
            min(value(right, t''), inf over t' strictly between t and t'' of
                value(left, t'))

with sup of an empty set = -inf and inf of an empty set = +inf (False/True
for the Boolean reading).  Future windows are [t+lo, t+hi], past windows
[t-hi, t-lo]; the strict inner range lies between the anchor t and the
candidate t'' in either direction.

Evaluation refuses with InsufficientHorizonError whenever the formula's
horizon does not fit the trace around t, instead of silently clipping
windows: a window clipped at the trace end would weaken "always" and
strengthen "eventually".  Within an admissible call every window lies inside
the trace.  Values are memoized bottom-up per (subformula, time), which
bounds the cost by O(formula size x trace length x window width).
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np

from .errors import InsufficientHorizonError, UnknownPredicateError
from .formula import (
    AlwaysFuture,
    AlwaysPast,
    And,
    EventuallyFuture,
    EventuallyPast,
    Formula,
    Not,
    Or,
    Predicate,
    TrueFormula,
    UntilFuture,
    UntilPast,
    horizon,
    predicate_names,
)
from .predicates import PredicateDef, signed_distance
from .trace import Ensemble, Trace

__all__ = ["eval_boolean", "eval_robust", "eval_robust_ensemble"]

INF = math.inf


def _check_admissible(f: Formula, trace: Trace, t: int, predicates: Mapping[str, PredicateDef]) -> None:
    missing = sorted(predicate_names(f) - set(predicates))
    if missing:
        raise UnknownPredicateError(f"formula references undefined predicates: {', '.join(missing)}")
    if not 0 <= t < trace.length:
        raise InsufficientHorizonError(
            f"time {t} outside the trace index range [0, {trace.length - 1}]"
        )
    h = horizon(f)
    if t + h.future_depth > trace.length - 1:
        raise InsufficientHorizonError(
            f"formula looks {h.future_depth} steps ahead but only "
            f"{trace.length - 1 - t} remain after t={t}"
        )
    if t - h.past_depth < 0:
        raise InsufficientHorizonError(
            f"formula looks {h.past_depth} steps back but only {t} precede t={t}"
        )


class _RobustEvaluator:
    def __init__(self, trace: Trace, predicates: Mapping[str, PredicateDef]):
        self.rows = trace.states.tolist()
        self.predicates = predicates
        self.memo: dict = {}

    def value(self, f: Formula, t: int) -> float:
        key = (id(f), t)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        result = self._compute(f, t)
        self.memo[key] = result
        return result

    def _compute(self, f: Formula, t: int) -> float:
        match f:
            case TrueFormula():
                return INF
            case Predicate(name):
                return signed_distance(self.predicates[name], self.rows[t])
            case Not(child):
                return -self.value(child, t)
            case And(left, right):
                return min(self.value(left, t), self.value(right, t))
            case Or(left, right):
                return max(self.value(left, t), self.value(right, t))
            case EventuallyFuture(child, iv):
                return max(self.value(child, s) for s in range(t + iv.lo, t + iv.hi + 1))
            case AlwaysFuture(child, iv):
                return min(self.value(child, s) for s in range(t + iv.lo, t + iv.hi + 1))
            case EventuallyPast(child, iv):
                return max(self.value(child, s) for s in range(t - iv.hi, t - iv.lo + 1))
            case AlwaysPast(child, iv):
                return min(self.value(child, s) for s in range(t - iv.hi, t - iv.lo + 1))
            case UntilFuture(left, right, iv):
                # Walk candidates upward, extending the strict inner window
                # incrementally so each candidate costs O(1).
                inner = INF
                for s in range(t + 1, t + iv.lo):
                    inner = min(inner, self.value(left, s))
                best = -INF
                for c in range(t + iv.lo, t + iv.hi + 1):
                    best = max(best, min(self.value(right, c), inner))
                    if c > t:
                        inner = min(inner, self.value(left, c))
                return best
            case UntilPast(left, right, iv):
                inner = INF
                for s in range(t - 1, t - iv.lo, -1):
                    inner = min(inner, self.value(left, s))
                best = -INF
                for c in range(t - iv.lo, t - iv.hi - 1, -1):
                    best = max(best, min(self.value(right, c), inner))
                    if c < t:
                        inner = min(inner, self.value(left, c))
                return best
        raise TypeError(f"not a formula node: {f!r}")


class _BooleanEvaluator:
    def __init__(self, trace: Trace, predicates: Mapping[str, PredicateDef]):
        self.rows = trace.states.tolist()
        self.predicates = predicates
        self.memo: dict = {}

    def value(self, f: Formula, t: int) -> bool:
        key = (id(f), t)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        result = self._compute(f, t)
        self.memo[key] = result
        return result

    def _compute(self, f: Formula, t: int) -> bool:
        match f:
            case TrueFormula():
                return True
            case Predicate(name):
                return signed_distance(self.predicates[name], self.rows[t]) >= 0.0
            case Not(child):
                return not self.value(child, t)
            case And(left, right):
                return self.value(left, t) and self.value(right, t)
            case Or(left, right):
                return self.value(left, t) or self.value(right, t)
            case EventuallyFuture(child, iv):
                return any(self.value(child, s) for s in range(t + iv.lo, t + iv.hi + 1))
            case AlwaysFuture(child, iv):
                return all(self.value(child, s) for s in range(t + iv.lo, t + iv.hi + 1))
            case EventuallyPast(child, iv):
                return any(self.value(child, s) for s in range(t - iv.hi, t - iv.lo + 1))
            case AlwaysPast(child, iv):
                return all(self.value(child, s) for s in range(t - iv.hi, t - iv.lo + 1))
            case UntilFuture(left, right, iv):
                inner = True
                for s in range(t + 1, t + iv.lo):
                    inner = inner and self.value(left, s)
                for c in range(t + iv.lo, t + iv.hi + 1):
                    if inner and self.value(right, c):
                        return True
                    if c > t:
                        inner = inner and self.value(left, c)
                return False
            case UntilPast(left, right, iv):
                inner = True
                for s in range(t - 1, t - iv.lo, -1):
                    inner = inner and self.value(left, s)
                for c in range(t - iv.lo, t - iv.hi - 1, -1):
                    if inner and self.value(right, c):
                        return True
                    if c < t:
                        inner = inner and self.value(left, c)
                return False
        raise TypeError(f"not a formula node: {f!r}")


def eval_boolean(f: Formula, trace: Trace, t: int, predicates: Mapping[str, PredicateDef]) -> bool:
    """Decide whether the trace satisfies the formula at time t."""
    _check_admissible(f, trace, t, predicates)
    return _BooleanEvaluator(trace, predicates).value(f, t)


def eval_robust(f: Formula, trace: Trace, t: int, predicates: Mapping[str, PredicateDef]) -> float:
    """Satisfaction margin of the trace for the formula at time t.

    Positive margins imply Boolean satisfaction, negative margins imply
    violation; the value may be +/-inf for formulas such as plain truth.
    """
    _check_admissible(f, trace, t, predicates)
    return _RobustEvaluator(trace, predicates).value(f, t)


def eval_robust_ensemble(
    f: Formula, ensemble: Ensemble, t: int, predicates: Mapping[str, PredicateDef]
) -> np.ndarray:
    """Negated robustness of every member trace, in ensemble order.

    Entry i is ``-eval_robust(f, trace_i, t)``: a sample of the cost "how
    close did realization i come to violating f".  Any member error aborts
    the whole evaluation.  The result may contain infinities; the risk
    estimators reject those at intake.
    """
    member = ensemble.traces[0]
    _check_admissible(f, member, t, predicates)
    out = np.empty(ensemble.n, dtype=float)
    for i, tr in enumerate(ensemble.traces):
        out[i] = -_RobustEvaluator(tr, predicates).value(f, t)
    return out
