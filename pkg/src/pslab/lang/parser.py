"""Tokenizer and recursive-descent parser for pwhile source text.

Grammar summary::

    program  := cmds
    cmds     := stmt (';' [cmds])?
    stmt     := 'skip' | X ':=' iexpr | X '~' dexpr
              | 'if' bexpr 'then' body ['else' body]
              | 'while' bexpr 'do' body
              | '{' cmds '}' | '(' cmds ')'
    body     := '{' cmds '}' | '(' cmds ')' | stmt

Line comments start with ``#``.  Sequencing is right-associative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, TypeVar

from .syntax import (
    Assign, Bernoulli, BinOp, BoolExpr, BoolLit, BoolOp, Cmp, Command, Dirac,
    Discrete, DistExpr, If, IntExpr, Lit, Neg, Not, Sample, Seq, Skip,
    UniformRange, UniformTo, Var, While,
)

__all__ = [
    "ParseError", "Parser", "Token", "parse_bool_expr", "parse_dist_expr",
    "parse_int_expr", "parse_program", "tokenize",
]

T = TypeVar("T")

KEYWORDS = {"skip", "if", "then", "else", "while", "do", "true", "false", "mod"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>:=|<=|&&|\|\||->|[~;{}()\[\],:+\-*/=<!])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'ident', 'kw', 'sym', 'eof'
    text: str
    line: int
    column: int
    offset: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            value = m.group()
            if kind == "ident" and value in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, value, line, pos - line_start + 1, pos))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1, pos))
    return tokens


class Parser:
    """Backtracking recursive-descent parser over a token list."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self._furthest: ParseError | None = None

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        return self.tok.kind != "eof" and self.tok.kind != "num" and self.tok.text in texts

    def error(self, expected: str) -> ParseError:
        tok = self.tok
        err = ParseError(f"expected {expected}, found {tok.describe()}", tok.line, tok.column)
        if self._furthest is None or (tok.line, tok.column) > (self._furthest.line, self._furthest.column):
            self._furthest = err
        return err

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(repr(text))
        tok = self.tok
        self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def ident(self) -> str:
        if self.tok.kind != "ident":
            raise self.error("a variable name")
        name = self.tok.text
        self.pos += 1
        return name

    def attempt(self, *alternatives: Callable[[], T]) -> T:
        """Try each alternative from the current position; keep the first success."""
        start = self.pos
        errors: list[ParseError] = []
        for alt in alternatives:
            self.pos = start
            try:
                return alt()
            except ParseError as exc:
                errors.append(exc)
        self.pos = start
        raise max(errors, key=lambda e: (e.line, e.column))

    def finish(self, value: T) -> T:
        if self.tok.kind != "eof":
            raise self.error("end of input")
        return value

    # -- integer expressions -------------------------------------------------

    def int_expr(self) -> IntExpr:
        e = self.int_term()
        while self.at("+", "-"):
            op = self.tok.text
            self.pos += 1
            e = BinOp(op, e, self.int_term())
        return e

    def int_term(self) -> IntExpr:
        e = self.int_unary()
        while self.at("*", "/", "mod"):
            op = self.tok.text
            self.pos += 1
            e = BinOp(op, e, self.int_unary())
        return e

    def int_unary(self) -> IntExpr:
        if self.accept("-"):
            if self.tok.kind == "num":
                value = int(self.tok.text)
                self.pos += 1
                return Lit(-value)
            return Neg(self.int_unary())
        return self.int_atom()

    def int_atom(self) -> IntExpr:
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            return Lit(int(tok.text))
        if tok.kind == "ident" and tok.text in ("min", "max") and self.peek().text == "(":
            self.pos += 2
            left = self.int_expr()
            self.expect(",")
            right = self.int_expr()
            self.expect(")")
            return BinOp(tok.text, left, right)
        if tok.kind == "ident":
            self.pos += 1
            return Var(tok.text)
        if self.accept("("):
            e = self.int_expr()
            self.expect(")")
            return e
        raise self.error("an integer expression")

    # -- boolean expressions -------------------------------------------------

    def bool_expr(self) -> BoolExpr:
        b = self.bool_conj()
        while self.accept("||"):
            b = BoolOp("||", b, self.bool_conj())
        return b

    def bool_conj(self) -> BoolExpr:
        b = self.bool_unary()
        while self.accept("&&"):
            b = BoolOp("&&", b, self.bool_unary())
        return b

    def bool_unary(self) -> BoolExpr:
        if self.accept("!"):
            return Not(self.bool_unary())
        return self.bool_atom()

    def bool_atom(self) -> BoolExpr:
        if self.accept("true"):
            return BoolLit(True)
        if self.accept("false"):
            return BoolLit(False)
        if self.at("("):
            return self.attempt(self.comparison, self._paren_bool)
        return self.comparison()

    def _paren_bool(self) -> BoolExpr:
        self.expect("(")
        b = self.bool_expr()
        self.expect(")")
        return b

    def comparison(self) -> BoolExpr:
        left = self.int_expr()
        if not self.at("=", "<", "<="):
            raise self.error("a comparison ('=', '<' or '<=')")
        op = self.tok.text
        self.pos += 1
        return Cmp(op, left, self.int_expr())

    # -- distribution expressions --------------------------------------------

    def rational(self) -> Fraction:
        tok = self.tok
        if tok.kind != "num":
            raise self.error("a rational literal")
        self.pos += 1
        num, den = int(tok.text), 1
        if self.accept("/"):
            if self.tok.kind != "num":
                raise self.error("a denominator")
            den = int(self.tok.text)
            if den == 0:
                raise self.error("a nonzero denominator")
            self.pos += 1
        return Fraction(num, den)

    def dist_expr(self) -> DistExpr:
        tok = self.tok
        name = tok.text if tok.kind == "ident" else ""
        if name == "uniform":
            self.pos += 1
            self.expect("(")
            first = self.int_expr()
            if self.accept(","):
                second = self.int_expr()
                self.expect(")")
                return UniformRange(first, second)
            self.expect(")")
            return UniformTo(first)
        if name == "bernoulli":
            self.pos += 1
            self.expect("(")
            p_tok = self.tok
            p = self.rational()
            if p > 1:
                raise ParseError(f"bernoulli parameter {p} is not in [0, 1]", p_tok.line, p_tok.column)
            self.expect(")")
            return Bernoulli(p)
        if name == "dirac":
            self.pos += 1
            self.expect("(")
            e = self.int_expr()
            self.expect(")")
            return Dirac(e)
        if name == "discrete":
            self.pos += 1
            open_tok = self.expect("{")
            entries = []
            while True:
                e = self.int_expr()
                self.expect(":")
                q_tok = self.tok
                q = self.rational()
                if q <= 0:
                    raise ParseError("discrete weights must be positive", q_tok.line, q_tok.column)
                entries.append((e, q))
                if not self.accept(","):
                    break
            self.expect("}")
            total = sum((q for _, q in entries), Fraction(0))
            if total != 1:
                raise ParseError(f"discrete weights sum to {total}, not 1", open_tok.line, open_tok.column)
            return Discrete(tuple(entries))
        raise self.error("a distribution (uniform, bernoulli, dirac or discrete)")

    # -- commands ------------------------------------------------------------

    def commands(self, closer: str | None = None) -> Command:
        first = self.statement()
        if self.accept(";"):
            if self.tok.kind == "eof" or (closer is not None and self.at(closer)):
                return first
            return Seq(first, self.commands(closer))
        return first

    def block(self) -> Command:
        if self.accept("{"):
            c = self.commands("}")
            self.expect("}")
            return c
        if self.accept("("):
            c = self.commands(")")
            self.expect(")")
            return c
        return self.statement()

    def statement(self) -> Command:
        tok = self.tok
        if self.accept("skip"):
            return Skip()
        if self.accept("if"):
            cond = self.bool_expr()
            self.expect("then")
            then = self.block()
            orelse = self.block() if self.accept("else") else Skip()
            return If(cond, then, orelse)
        if self.accept("while"):
            cond = self.bool_expr()
            self.expect("do")
            return While(cond, self.block())
        if self.at("{", "("):
            return self.block()
        if tok.kind == "ident":
            self.pos += 1
            if self.accept(":="):
                return Assign(tok.text, self.int_expr())
            if self.accept("~"):
                return Sample(tok.text, self.dist_expr())
            raise self.error("':=' or '~'")
        raise self.error("a command")


def parse_program(text: str) -> Command:
    p = Parser(text)
    return p.finish(p.commands())


def parse_int_expr(text: str) -> IntExpr:
    p = Parser(text)
    return p.finish(p.int_expr())


def parse_bool_expr(text: str) -> BoolExpr:
    p = Parser(text)
    return p.finish(p.bool_expr())


def parse_dist_expr(text: str) -> DistExpr:
    p = Parser(text)
    return p.finish(p.dist_expr())
