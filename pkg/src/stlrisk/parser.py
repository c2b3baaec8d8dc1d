"""Textual formula language: parsing and canonical pretty-printing.

Grammar (whitespace-insensitive between tokens)::

    formula  := disj
    disj     := conj ("|" conj)*
    conj     := until ("&" until)*
    until    := unary (("U" | "S") interval unary)?
    unary    := "!" unary
              | ("G" | "F" | "H" | "O") interval unary
              | atom
    atom     := "true" | identifier | "(" formula ")"
    interval := "[" integer "," (integer | "inf") "]"

``U``/``S`` are the future/past until, ``G``/``F`` always/eventually over
the future, ``H``/``O`` their past counterparts.  Precedence, tightest
first: ``!`` and the temporal unaries, then ``U``/``S``, then ``&``, then
``|``.  ``&`` and ``|`` associate left; until is non-associative, so chains
like ``a U[0,1] b U[0,2] c`` must be parenthesized.  Identifiers match
``[A-Za-z_][A-Za-z0-9_]*``; the operator letters and ``true`` are reserved
and cannot name predicates.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import FormulaSyntaxError, IntervalError
from .formula import (
    TRUE,
    AlwaysFuture,
    AlwaysPast,
    And,
    EventuallyFuture,
    EventuallyPast,
    Formula,
    Not,
    Or,
    Predicate,
    TimeInterval,
    TrueFormula,
    UntilFuture,
    UntilPast,
)

__all__ = ["SourceSpan", "parse", "format_formula"]


@dataclass(frozen=True)
class SourceSpan:
    """Half-open character range [start, end) into the parsed text."""

    start: int
    end: int


_RESERVED = {"true", "U", "S", "G", "F", "H", "O"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>\d+)
  | (?P<sym>[()\[\],&|!-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident", "int", "kw", a symbol character, or "eof"
    text: str
    start: int
    end: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.start, self.end)


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", SourceSpan(pos, pos + 1)
            )
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        value = m.group()
        if m.lastgroup == "ident":
            kind = "kw" if value in _RESERVED else "ident"
        elif m.lastgroup == "int":
            kind = "int"
        else:
            kind = value
        tokens.append(_Token(kind, value, m.start(), m.end()))
    tokens.append(_Token("eof", "", len(text), len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise FormulaSyntaxError(
                f"expected {what}, found {tok.text!r}" if tok.kind != "eof" else f"expected {what}, found end of input",
                tok.span,
            )
        return self.take()

    def parse(self) -> Formula:
        f = self.disj()
        tok = self.peek()
        if tok.kind != "eof":
            raise FormulaSyntaxError(f"unexpected trailing input {tok.text!r}", tok.span)
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.until()
        while self.peek().kind == "&":
            self.take()
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        left = self.unary()
        tok = self.peek()
        if tok.kind == "kw" and tok.text in ("U", "S"):
            self.take()
            interval = self.interval()
            right = self.unary()
            nxt = self.peek()
            if nxt.kind == "kw" and nxt.text in ("U", "S"):
                raise FormulaSyntaxError(
                    "until is non-associative; parenthesize the chain", nxt.span
                )
            node = UntilFuture if tok.text == "U" else UntilPast
            return node(left, right, interval)
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "!":
            self.take()
            return Not(self.unary())
        if tok.kind == "kw" and tok.text in ("G", "F", "H", "O"):
            self.take()
            interval = self.interval()
            child = self.unary()
            node = {
                "G": AlwaysFuture,
                "F": EventuallyFuture,
                "H": AlwaysPast,
                "O": EventuallyPast,
            }[tok.text]
            return node(child, interval)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "true":
            self.take()
            return TRUE
        if tok.kind == "ident":
            self.take()
            return Predicate(tok.text)
        if tok.kind == "(":
            self.take()
            f = self.disj()
            self.expect(")", "')'")
            return f
        raise FormulaSyntaxError(
            f"expected a formula, found {tok.text!r}" if tok.kind != "eof" else "expected a formula, found end of input",
            tok.span,
        )

    def interval(self) -> TimeInterval:
        open_tok = self.expect("[", "'['")
        lo = self._bound(allow_inf=False)
        self.expect(",", "','")
        hi = self._bound(allow_inf=True)
        close_tok = self.expect("]", "']'")
        span = SourceSpan(open_tok.start, close_tok.end)
        if lo < 0 or (hi != math.inf and hi < 0):
            raise IntervalError("interval bounds must be non-negative", span)
        if lo > hi:
            raise IntervalError(f"empty interval: {lo} > {hi}", span)
        return TimeInterval(lo, hi)

    def _bound(self, allow_inf: bool):
        tok = self.peek()
        if allow_inf and tok.kind == "ident" and tok.text == "inf":
            self.take()
            return math.inf
        negative = False
        if tok.kind == "-":
            self.take()
            negative = True
        num = self.expect("int", "an integer bound")
        value = int(num.text)
        return -value if negative else value


def parse(text: str) -> Formula:
    """Parse formula text, raising FormulaSyntaxError or IntervalError."""
    return _Parser(text).parse()


# Precedence levels used for minimal parenthesization.
_LVL_OR, _LVL_AND, _LVL_UNTIL, _LVL_UNARY, _LVL_ATOM = 1, 2, 3, 4, 5


def _level(f: Formula) -> int:
    match f:
        case Or():
            return _LVL_OR
        case And():
            return _LVL_AND
        case UntilFuture() | UntilPast():
            return _LVL_UNTIL
        case Not() | EventuallyFuture() | AlwaysFuture() | EventuallyPast() | AlwaysPast():
            return _LVL_UNARY
        case _:
            return _LVL_ATOM


def _fmt(f: Formula, min_level: int) -> str:
    if _level(f) < min_level:
        return "(" + _fmt(f, _LVL_OR) + ")"
    match f:
        case TrueFormula():
            return "true"
        case Predicate(name):
            return name
        case Not(child):
            return "!" + _fmt(child, _LVL_UNARY)
        case And(left, right):
            return _fmt(left, _LVL_AND) + " & " + _fmt(right, _LVL_UNTIL)
        case Or(left, right):
            return _fmt(left, _LVL_OR) + " | " + _fmt(right, _LVL_AND)
        case UntilFuture(left, right, interval):
            return f"{_fmt(left, _LVL_UNARY)} U{interval} {_fmt(right, _LVL_UNARY)}"
        case UntilPast(left, right, interval):
            return f"{_fmt(left, _LVL_UNARY)} S{interval} {_fmt(right, _LVL_UNARY)}"
        case EventuallyFuture(child, interval):
            return _unary_fmt("F", interval, child)
        case AlwaysFuture(child, interval):
            return _unary_fmt("G", interval, child)
        case EventuallyPast(child, interval):
            return _unary_fmt("O", interval, child)
        case AlwaysPast(child, interval):
            return _unary_fmt("H", interval, child)
    raise TypeError(f"not a formula node: {f!r}")


def _unary_fmt(op: str, interval: TimeInterval, child: Formula) -> str:
    body = _fmt(child, _LVL_UNARY)
    sep = "" if body.startswith("(") else " "
    return f"{op}{interval}{sep}{body}"


def format_formula(f: Formula) -> str:
    """Canonical text with minimal parentheses; parse(format_formula(f)) == f."""
    return _fmt(f, _LVL_OR)
