"""Shared test machinery: independent oracles and random-instance generators.

The evaluation oracles below deliberately re-derive the semantics as naive
nested loops over explicit time-index sets, with the extended inf/sup
conventions spelled out, so they share no code path with the memoized
evaluators they check.  Likewise the quantile oracles scan the empirical
CDF literally instead of indexing order statistics.
"""

from __future__ import annotations

import math

import numpy as np

from stlrisk.formula import (
    TRUE,
    AlwaysFuture,
    AlwaysPast,
    And,
    EventuallyFuture,
    EventuallyPast,
    Not,
    Or,
    Predicate,
    TimeInterval,
    UntilFuture,
    UntilPast,
    horizon,
)
from stlrisk.predicates import Halfspace, NormBall, signed_distance
from stlrisk.trace import Trace

INF = math.inf


# ---------------------------------------------------------------------------
# Direct-expansion evaluation oracles


def rho_oracle(f, trace: Trace, t: int, predicates) -> float:
    """Quantitative semantics by literal expansion, no memoization."""
    L = trace.length

    def rec(g, s):
        if isinstance(g, type(TRUE)):
            return INF
        if isinstance(g, Predicate):
            return signed_distance(predicates[g.name], trace.states[s])
        if isinstance(g, Not):
            return -rec(g.child, s)
        if isinstance(g, And):
            return min(rec(g.left, s), rec(g.right, s))
        if isinstance(g, Or):
            # by definition: not (not a and not b)
            return -min(-rec(g.left, s), -rec(g.right, s))
        if isinstance(g, EventuallyFuture):
            return rec(UntilFuture(TRUE, g.child, g.interval), s)
        if isinstance(g, AlwaysFuture):
            return -rec(UntilFuture(TRUE, Not(g.child), g.interval), s)
        if isinstance(g, EventuallyPast):
            return rec(UntilPast(TRUE, g.child, g.interval), s)
        if isinstance(g, AlwaysPast):
            return -rec(UntilPast(TRUE, Not(g.child), g.interval), s)
        if isinstance(g, (UntilFuture, UntilPast)):
            lo, hi = g.interval.lo, g.interval.hi
            if isinstance(g, UntilFuture):
                window = [c for c in range(s + lo, s + hi + 1) if 0 <= c <= L - 1]
            else:
                window = [c for c in range(s - hi, s - lo + 1) if 0 <= c <= L - 1]
            candidates = []
            for c in window:
                between = range(min(s, c) + 1, max(s, c))
                inner = [rec(g.left, u) for u in between]
                inner_val = min(inner) if inner else INF  # inf of the empty set
                candidates.append(min(rec(g.right, c), inner_val))
            return max(candidates) if candidates else -INF  # sup of the empty set
        raise TypeError(g)

    return rec(f, t)


def beta_oracle(f, trace: Trace, t: int, predicates) -> bool:
    """Boolean semantics by literal expansion."""
    L = trace.length

    def rec(g, s):
        if isinstance(g, type(TRUE)):
            return True
        if isinstance(g, Predicate):
            return signed_distance(predicates[g.name], trace.states[s]) >= 0.0
        if isinstance(g, Not):
            return not rec(g.child, s)
        if isinstance(g, And):
            return min(rec(g.left, s), rec(g.right, s))
        if isinstance(g, Or):
            return not min(not rec(g.left, s), not rec(g.right, s))
        if isinstance(g, EventuallyFuture):
            return rec(UntilFuture(TRUE, g.child, g.interval), s)
        if isinstance(g, AlwaysFuture):
            return not rec(UntilFuture(TRUE, Not(g.child), g.interval), s)
        if isinstance(g, EventuallyPast):
            return rec(UntilPast(TRUE, g.child, g.interval), s)
        if isinstance(g, AlwaysPast):
            return not rec(UntilPast(TRUE, Not(g.child), g.interval), s)
        if isinstance(g, (UntilFuture, UntilPast)):
            lo, hi = g.interval.lo, g.interval.hi
            if isinstance(g, UntilFuture):
                window = [c for c in range(s + lo, s + hi + 1) if 0 <= c <= L - 1]
            else:
                window = [c for c in range(s - hi, s - lo + 1) if 0 <= c <= L - 1]
            candidates = []
            for c in window:
                between = range(min(s, c) + 1, max(s, c))
                inner = [rec(g.left, u) for u in between]
                inner_val = min(inner) if inner else True  # inf of the empty set
                candidates.append(min(rec(g.right, c), inner_val))
            return max(candidates) if candidates else False  # sup of the empty set
        raise TypeError(g)

    return bool(rec(f, t))


# ---------------------------------------------------------------------------
# Literal-scan quantile oracles


def var_scan(values, beta: float) -> float:
    """inf{a : F(a) >= beta} scanned over the sample values."""
    z = list(values)
    n = len(z)
    hits = [a for a in z if sum(v <= a for v in z) / n >= beta]
    return min(hits)


def var_bounds_scan(values, beta: float, delta: float):
    """The shifted infimum sets of the confidence triple, scanned literally."""
    z = list(values)
    n = len(z)
    eps = math.sqrt(math.log(2.0 / delta) / (2.0 * n))

    def cdf(a):
        return sum(v <= a for v in z) / n

    upper_hits = [a for a in z if cdf(a) - eps >= beta]
    upper = min(upper_hits) if upper_hits else INF
    # F(-inf) = 0 already satisfies F + eps >= beta when beta <= eps.
    if 0.0 + eps >= beta:
        lower = -INF
    else:
        lower_hits = [a for a in z if cdf(a) + eps >= beta]
        lower = min(lower_hits) if lower_hits else INF
    return lower, var_scan(z, beta), upper


def cvar_scan(values, beta: float) -> float:
    """Evaluate the conditional-value-at-risk objective at every sample."""
    z = list(values)
    n = len(z)
    best = INF
    for a in z:
        g = a + sum(max(v - a, 0.0) for v in z) / ((1.0 - beta) * n)
        best = min(best, g)
    return best


# ---------------------------------------------------------------------------
# Random instance generators


def random_predicates(rng: np.random.Generator, dim: int, count: int = 4) -> dict:
    table = {}
    for i in range(count):
        if rng.random() < 0.5:
            a = rng.normal(size=dim)
            while not np.any(a):
                a = rng.normal(size=dim)
            table[f"p{i}"] = Halfspace(tuple(a), float(rng.normal()))
        else:
            k = int(rng.integers(1, dim + 1))
            pos = tuple(int(v) for v in rng.choice(dim, size=k, replace=False))
            center = tuple(float(v) for v in rng.normal(size=k))
            norm = "l2" if rng.random() < 0.5 else "linf"
            table[f"p{i}"] = NormBall(pos, center, float(rng.uniform(0.2, 2.0)), norm)
    return table


def random_formula(
    rng: np.random.Generator,
    names,
    depth: int,
    max_window: int = 3,
    allow_not: bool = True,
    allow_past: bool = True,
):
    names = list(names)

    def interval():
        lo = int(rng.integers(0, max_window + 1))
        hi = int(rng.integers(lo, max_window + 1))
        return TimeInterval(lo, hi)

    def leaf():
        if rng.random() < 0.06:
            return TRUE
        return Predicate(str(rng.choice(names)))

    def node(d):
        if d <= 0:
            return leaf()
        ops = ["leaf", "and", "or", "until_f", "ev_f", "alw_f"]
        if allow_not:
            ops.append("not")
        if allow_past:
            ops += ["until_p", "ev_p", "alw_p"]
        op = str(rng.choice(ops))
        if op == "leaf":
            return leaf()
        if op == "not":
            return Not(node(d - 1))
        if op == "and":
            return And(node(d - 1), node(d - 1))
        if op == "or":
            return Or(node(d - 1), node(d - 1))
        if op == "until_f":
            return UntilFuture(node(d - 1), node(d - 1), interval())
        if op == "until_p":
            return UntilPast(node(d - 1), node(d - 1), interval())
        if op == "ev_f":
            return EventuallyFuture(node(d - 1), interval())
        if op == "alw_f":
            return AlwaysFuture(node(d - 1), interval())
        if op == "ev_p":
            return EventuallyPast(node(d - 1), interval())
        return AlwaysPast(node(d - 1), interval())

    return node(depth)


def random_trace(rng: np.random.Generator, length: int, dim: int) -> Trace:
    return Trace(rng.normal(scale=2.0, size=(length, dim)))


def random_admissible_case(
    rng: np.random.Generator,
    max_depth: int = 4,
    max_length: int = 10,
    max_dim: int = 3,
    allow_not: bool = True,
    allow_past: bool = True,
    max_window: int = 3,
):
    """A (formula, trace, t, predicates) tuple whose horizon fits the trace."""
    while True:
        dim = int(rng.integers(1, max_dim + 1))
        length = int(rng.integers(1, max_length + 1))
        predicates = random_predicates(rng, dim)
        f = random_formula(
            rng,
            predicates,
            depth=int(rng.integers(0, max_depth + 1)),
            max_window=max_window,
            allow_not=allow_not,
            allow_past=allow_past,
        )
        h = horizon(f)
        t_min, t_max = h.past_depth, length - 1 - h.future_depth
        if t_min > t_max:
            continue
        t = int(rng.integers(t_min, t_max + 1))
        return f, random_trace(rng, length, dim), t, predicates


def random_formula_text(rng: np.random.Generator, depth: int = 3) -> str:
    """Formula text via the canonical printer over a random tree."""
    from stlrisk.parser import format_formula

    names = [f"sig{i}" for i in range(4)]
    return format_formula(random_formula(rng, names, depth))
