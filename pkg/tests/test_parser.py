import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stlrisk.errors import FormulaSyntaxError, IntervalError
from stlrisk.formula import (
    TRUE,
    AlwaysFuture,
    And,
    EventuallyFuture,
    Not,
    Or,
    Predicate,
    TimeInterval,
    UntilFuture,
    UntilPast,
)
from stlrisk.parser import format_formula, parse

from .helpers import random_formula

P, Q, R = Predicate("p"), Predicate("q"), Predicate("r")


class TestParse:
    def test_case_study_formula(self):
        f = parse("G[0,3](!inC & !inD) & F[1,2](inA & F[0,1] inB)")
        expected = And(
            AlwaysFuture(And(Not(Predicate("inC")), Not(Predicate("inD"))), TimeInterval(0, 3)),
            EventuallyFuture(
                And(Predicate("inA"), EventuallyFuture(Predicate("inB"), TimeInterval(0, 1))),
                TimeInterval(1, 2),
            ),
        )
        assert f == expected

    def test_true_literal(self):
        assert parse("true") == TRUE

    def test_inverted_interval_is_interval_error(self):
        with pytest.raises(IntervalError) as exc:
            parse("p U[3,1] q")
        assert exc.value.span is not None

    def test_negative_bound_is_interval_error(self):
        with pytest.raises(IntervalError):
            parse("G[-1,2] p")

    def test_unbounded_interval_parses(self):
        f = parse("F[2,inf] p")
        assert f == EventuallyFuture(P, TimeInterval(2, math.inf))

    def test_precedence_not_tighter_than_and(self):
        assert parse("!p & q") == And(Not(P), Q)

    def test_precedence_and_tighter_than_or(self):
        assert parse("p | q & r") == Or(P, And(Q, R))

    def test_until_between_unary_and_and(self):
        assert parse("p U[0,1] q & r") == And(UntilFuture(P, Q, TimeInterval(0, 1)), R)

    def test_past_operators(self):
        assert parse("p S[1,2] q") == UntilPast(P, Q, TimeInterval(1, 2))
        assert parse("H[0,2] p") == parse("H[0,2](p)")

    def test_until_chain_requires_parens(self):
        with pytest.raises(FormulaSyntaxError):
            parse("p U[0,1] q U[0,2] r")
        assert parse("(p U[0,1] q) U[0,2] r") == UntilFuture(
            UntilFuture(P, Q, TimeInterval(0, 1)), R, TimeInterval(0, 2)
        )

    def test_whitespace_insensitive(self):
        assert parse(" G [ 0 , 3 ]\tp ") == parse("G[0,3]p")

    def test_reserved_words_cannot_be_predicates(self):
        with pytest.raises(FormulaSyntaxError):
            parse("G & p")

    def test_trailing_garbage_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse("p q")

    def test_error_spans_lie_within_input(self):
        bad = ["p U[0", "(((", "p &", "", "G[0,3", "p | | q", "5p", "G[x,3] p"]
        for text in bad:
            with pytest.raises((FormulaSyntaxError, IntervalError)) as exc:
                parse(text)
            span = exc.value.span
            if span is not None:
                assert 0 <= span.start <= span.end <= len(text)


class TestFormat:
    def test_single_negation(self):
        assert format_formula(Not(P)) == "!p"

    def test_parens_forced_by_precedence(self):
        assert format_formula(And(P, Or(Q, R))) == "p & (q | r)"

    def test_always_canonical(self):
        assert format_formula(AlwaysFuture(P, TimeInterval(0, 3))) == "G[0,3] p"

    def test_left_associative_chains_unparenthesized(self):
        assert format_formula(Or(Or(P, Q), R)) == "p | q | r"
        assert format_formula(Or(P, Or(Q, R))) == "p | (q | r)"

    def test_round_trip_random_formulas(self):
        rng = np.random.default_rng(404)
        names = ["a", "b_2", "x", "long_name"]
        for _ in range(1000):
            f = random_formula(rng, names, depth=int(rng.integers(0, 5)))
            assert parse(format_formula(f)) == f


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=40))
def test_fuzz_never_crashes_unicode(text):
    try:
        parse(text)
    except (FormulaSyntaxError, IntervalError):
        pass


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="pqGFUSHO[](),&|!truein0123456789 -", max_size=40))
def test_fuzz_never_crashes_grammar_alphabet(text):
    try:
        parse(text)
    except (FormulaSyntaxError, IntervalError):
        pass
