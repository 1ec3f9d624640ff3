"""Semantic assertions over random states.

An :class:`Assertion` is a footprint (a finite set of variables) plus a
three-valued satisfaction function.  Satisfaction is undefined exactly when
the random state is not total on the footprint; otherwise it is decided by
a check that only looks at the footprint variables and only depends on the
distribution of the random state.

Because sample points never have zero weight, "with probability 1" is
checked as "at every sample point".

Expressions that fault arithmetically (``X / 0``) at some sample point do
not make an assertion undefined.  Such a point has no proper value: ``[B]``
and ``Det(E)`` are false there, and ``E ~ D`` and conditioning on ``E`` are
false as soon as any point faults.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Iterable
from dataclasses import dataclass

from .lang.evaluate import EvalFault, eval_bool, eval_dist, eval_int
from .lang.parser import Parser
from .lang.syntax import BoolExpr, BoolLit, DistExpr, IntExpr, pretty, vars_of
from .prob import condition, distribution_of, independent
from .state import RandomState, State, random_is_total, restrict

__all__ = [
    "Assertion", "Sat", "TOP", "conj", "disj", "implies", "make_cond",
    "make_connective", "make_det", "make_event", "make_sep", "make_sim",
    "neg", "parse_assertion", "sep",
]


class Sat(enum.Enum):
    TT = "tt"
    FF = "ff"
    UNDEF = "undefined"

    @classmethod
    def of(cls, value: bool) -> Sat:
        return cls.TT if value else cls.FF


@dataclass(frozen=True, eq=False)
class Assertion:
    """A semantic assertion.

    ``check`` is only ever called on random states that are total on
    ``fv``; :meth:`evaluate` handles the undefined case.
    """

    fv: frozenset[str]
    check: Callable[[RandomState], bool]
    description: str
    # Precedence of the description, for parenthesizing: 4 atom/unary,
    # 3 '*', 2 '&&', 1 '||', 0 '->'.
    prec: int = 4
    # Former name and operands, kept for diagnostics ("sep" records both sides).
    kind: str = "atom"
    parts: tuple[Assertion, ...] = ()

    def evaluate(self, rs: RandomState) -> Sat:
        if not random_is_total(rs, self.fv):
            return Sat.UNDEF
        return Sat.of(self.check(rs))

    __call__ = evaluate

    def __str__(self) -> str:
        return self.description

    def __repr__(self) -> str:
        return f"Assertion({self.description!r}, fv={sorted(self.fv)})"


class _Faulted:
    """Stands in for the value of an expression that faulted arithmetically."""

    def __repr__(self) -> str:
        return "<fault>"


FAULTED = _Faulted()


def _value(fn, expr, s: State):
    try:
        return fn(expr, s)
    except EvalFault:
        return FAULTED


def _wrap(a: Assertion, need: int) -> str:
    return f"({a.description})" if a.prec < need else a.description


# -- atoms --------------------------------------------------------------------

def make_event(b: BoolExpr) -> Assertion:
    """``[B]``: B holds with probability 1."""
    def check(rs: RandomState) -> bool:
        return all(_value(eval_bool, b, s) is True for s in rs.values)

    if b == BoolLit(True):
        return Assertion(frozenset(), check, "top")
    return Assertion(vars_of(b), check, f"[{pretty(b)}]")


TOP = make_event(BoolLit(True))


def make_sim(e: IntExpr, d: DistExpr) -> Assertion:
    """``E ~ D``: conditional on each value of D, E is distributed as that value."""
    def check(rs: RandomState) -> bool:
        pairs = rs.map(lambda s: (_value(eval_int, e, s), _value(eval_dist, d, s)))
        dists = distribution_of(pairs.map(lambda p: p[1]))
        if FAULTED in dists or any(v is FAULTED for v, _ in pairs.values):
            return False
        for d0 in dists:
            cell = condition(pairs, lambda p: p[1], d0)
            if distribution_of(cell.map(lambda p: p[0])) != d0:
                return False
        return True

    return Assertion(vars_of(e) | vars_of(d), check, f"{pretty(e)} ~ {pretty(d)}")


def make_det(e: IntExpr) -> Assertion:
    """``Det(E)``: E takes a single value with probability 1."""
    def check(rs: RandomState) -> bool:
        values = {_value(eval_int, e, s) for s in rs.values}
        return len(values) == 1 and FAULTED not in values

    return Assertion(vars_of(e), check, f"det({pretty(e)})")


# -- connectives ----------------------------------------------------------------

def neg(a: Assertion) -> Assertion:
    return Assertion(a.fv, lambda rs: not a.check(rs), "!" + _wrap(a, 4))


def conj(a: Assertion, b: Assertion) -> Assertion:
    return Assertion(a.fv | b.fv, lambda rs: a.check(rs) and b.check(rs),
                     f"{_wrap(a, 2)} && {_wrap(b, 3)}", prec=2)


def disj(a: Assertion, b: Assertion) -> Assertion:
    return Assertion(a.fv | b.fv, lambda rs: a.check(rs) or b.check(rs),
                     f"{_wrap(a, 1)} || {_wrap(b, 2)}", prec=1)


def implies(a: Assertion, b: Assertion) -> Assertion:
    return Assertion(a.fv | b.fv, lambda rs: not a.check(rs) or b.check(rs),
                     f"{_wrap(a, 1)} -> {_wrap(b, 0)}", prec=0)


_CONNECTIVES = {"not": (1, neg), "and": (2, conj), "or": (2, disj), "implies": (2, implies)}


def make_connective(kind: str, *args: Assertion) -> Assertion:
    """Classical connective by name: ``not``, ``and``, ``or``, ``implies``."""
    try:
        arity, build = _CONNECTIVES[kind]
    except KeyError:
        raise ValueError(f"unknown connective {kind!r}") from None
    if len(args) != arity:
        raise TypeError(f"{kind} takes {arity} argument(s), got {len(args)}")
    return build(*args)


def make_cond(e: IntExpr, phi: Assertion) -> Assertion:
    """Conditioning modality: phi holds after conditioning on each value of E."""
    def check(rs: RandomState) -> bool:
        keyed = rs.map(lambda s: _value(eval_int, e, s))
        values = set(keyed.values)
        if FAULTED in values:
            return False
        return all(
            phi.check(condition(rs, lambda s: _value(eval_int, e, s), n)) for n in values
        )

    return Assertion(vars_of(e) | phi.fv, check, f"cond({pretty(e)}) {_wrap(phi, 4)}")


def make_sep(phi: Assertion, psi: Assertion) -> Assertion:
    """Separating conjunction: both hold and their footprints are independent."""
    def check(rs: RandomState) -> bool:
        return (
            phi.check(rs)
            and psi.check(rs)
            and independent(rs, lambda s: restrict(s, phi.fv), lambda s: restrict(s, psi.fv))
        )

    return Assertion(phi.fv | psi.fv, check, f"{_wrap(phi, 3)} * {_wrap(psi, 4)}",
                     prec=3, kind="sep", parts=(phi, psi))


sep = make_sep


# -- concrete syntax --------------------------------------------------------------

class AssertionParser(Parser):
    """Precedence, loosest first: ``->`` (right), ``||``, ``&&``, ``*``, unary."""

    def assertion(self) -> Assertion:
        left = self.a_disj()
        if self.accept("->"):
            return implies(left, self.assertion())
        return left

    def a_disj(self) -> Assertion:
        a = self.a_conj()
        while self.accept("||"):
            a = disj(a, self.a_conj())
        return a

    def a_conj(self) -> Assertion:
        a = self.a_sep()
        while self.accept("&&"):
            a = conj(a, self.a_sep())
        return a

    def a_sep(self) -> Assertion:
        a = self.a_unary()
        while self.accept("*"):
            a = make_sep(a, self.a_unary())
        return a

    def a_unary(self) -> Assertion:
        if self.accept("!"):
            return neg(self.a_unary())
        tok = self.tok
        if tok.kind == "ident" and tok.text == "cond" and self.peek().text == "(":
            self.pos += 2
            e = self.int_expr()
            self.expect(")")
            return make_cond(e, self.a_unary())
        return self.a_atom()

    def a_atom(self) -> Assertion:
        tok = self.tok
        if tok.kind == "ident" and tok.text == "top" and self.peek().text not in ("~",):
            self.pos += 1
            return TOP
        if self.accept("["):
            b = self.bool_expr()
            self.expect("]")
            return make_event(b)
        if tok.kind == "ident" and tok.text == "det" and self.peek().text == "(":
            self.pos += 2
            e = self.int_expr()
            self.expect(")")
            return make_det(e)
        if self.at("("):
            return self.attempt(self._sim, self._paren)
        return self._sim()

    def _paren(self) -> Assertion:
        self.expect("(")
        a = self.assertion()
        self.expect(")")
        return a

    def _sim(self) -> Assertion:
        e = self.int_expr()
        if not self.at("~"):
            raise self.error("'~' or an assertion")
        self.pos += 1
        return make_sim(e, self.dist_expr())


def parse_assertion(text: str) -> Assertion:
    """Build an assertion from ``[B]``, ``E ~ D``, ``det(E)``, ``!P``, ``P && Q``,
    ``P || Q``, ``P -> Q``, ``cond(E) P``, ``P * Q`` and ``top``."""
    p = AssertionParser(text)
    return p.finish(p.assertion())


def footprint(assertions: Iterable[Assertion]) -> frozenset[str]:
    return frozenset().union(*(a.fv for a in assertions))
