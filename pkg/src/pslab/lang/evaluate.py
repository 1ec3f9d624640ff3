"""Expression evaluation in partial states.

Evaluation is *defined* exactly when every variable of the expression is
bound; otherwise the evaluators return ``None``.  Arithmetic that is
impossible even with all variables bound (division by zero, an empty
``uniform`` range) raises :class:`EvalFault`.
"""

from __future__ import annotations

from fractions import Fraction

from ..prob import Dist
from ..state import State
from .syntax import (
    Bernoulli, BinOp, BoolExpr, BoolLit, BoolOp, Cmp, Dirac, Discrete, DistExpr,
    IntExpr, Lit, Neg, Not, UniformRange, UniformTo, Var, vars_of,
)

__all__ = ["EvalFault", "eval_bool", "eval_dist", "eval_int", "is_defined"]


class EvalFault(ArithmeticError):
    """Evaluation failed although every variable was defined."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def is_defined(expr, s: State) -> bool:
    return all(x in s for x in vars_of(expr))


def _int(e: IntExpr, s: State) -> int:
    match e:
        case Lit(v):
            return v
        case Var(name):
            return s[name]
        case Neg(arg):
            return -_int(arg, s)
        case BinOp(op, left, right):
            a, b = _int(left, s), _int(right, s)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "min":
                return min(a, b)
            if op == "max":
                return max(a, b)
            if b == 0:
                raise EvalFault("division-by-zero", f"{op} by zero")
            # Floor division; mod takes the sign of the divisor.
            return a // b if op == "/" else a % b
    raise TypeError(f"not an integer expression: {e!r}")


def eval_int(e: IntExpr, s: State) -> int | None:
    if not is_defined(e, s):
        return None
    return _int(e, s)


def _bool(b: BoolExpr, s: State) -> bool:
    match b:
        case BoolLit(v):
            return v
        case Cmp(op, left, right):
            x, y = _int(left, s), _int(right, s)
            return x == y if op == "=" else x < y if op == "<" else x <= y
        case Not(arg):
            return not _bool(arg, s)
        case BoolOp("&&", left, right):
            # Both sides are evaluated so faults do not depend on short-circuiting.
            l, r = _bool(left, s), _bool(right, s)
            return l and r
        case BoolOp("||", left, right):
            l, r = _bool(left, s), _bool(right, s)
            return l or r
    raise TypeError(f"not a boolean expression: {b!r}")


def eval_bool(b: BoolExpr, s: State) -> bool | None:
    if not is_defined(b, s):
        return None
    return _bool(b, s)


def _interval(lo: int, hi: int) -> Dist[int]:
    return Dist.uniform(range(lo, hi + 1))


def eval_dist(d: DistExpr, s: State) -> Dist[int] | None:
    if not is_defined(d, s):
        return None
    match d:
        case UniformTo(bound):
            n = _int(bound, s)
            return _interval(min(0, n), max(0, n))
        case UniformRange(low, high):
            lo, hi = _int(low, s), _int(high, s)
            if lo > hi:
                raise EvalFault("invalid-parameter", f"uniform({lo}, {hi}) has an empty range")
            return _interval(lo, hi)
        case Bernoulli(p):
            return Dist({1: p, 0: 1 - p})
        case Dirac(e):
            return Dist.point(_int(e, s))
        case Discrete(entries):
            weights: dict[int, Fraction] = {}
            for e, q in entries:
                v = _int(e, s)
                weights[v] = weights.get(v, Fraction(0)) + q
            return Dist(weights)
    raise TypeError(f"not a distribution expression: {d!r}")
