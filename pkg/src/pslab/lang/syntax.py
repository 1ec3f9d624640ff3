"""Abstract syntax of pwhile: integer, boolean and distribution expressions, commands."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "Assign", "BinOp", "BoolExpr", "BoolLit", "BoolOp", "Command", "Cmp",
    "Bernoulli", "Dirac", "Discrete", "DistExpr", "If", "IntExpr", "Lit",
    "Neg", "Not", "Sample", "Seq", "Skip", "UniformRange", "UniformTo", "Var",
    "While", "mv", "pretty", "seq", "vars_of",
]


# -- integer expressions ----------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: IntExpr


@dataclass(frozen=True)
class BinOp:
    """``op`` is one of ``+ - * / mod min max``."""

    op: str
    left: IntExpr
    right: IntExpr


IntExpr = Union[Lit, Var, Neg, BinOp]


# -- boolean expressions ----------------------------------------------------

@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Cmp:
    """``op`` is one of ``= < <=``."""

    op: str
    left: IntExpr
    right: IntExpr


@dataclass(frozen=True)
class Not:
    arg: BoolExpr


@dataclass(frozen=True)
class BoolOp:
    """``op`` is ``&&`` or ``||``."""

    op: str
    left: BoolExpr
    right: BoolExpr


BoolExpr = Union[BoolLit, Cmp, Not, BoolOp]


# -- distribution expressions -----------------------------------------------

@dataclass(frozen=True)
class UniformTo:
    """Uniform on ``[min(0, n), max(0, n)]``."""

    bound: IntExpr


@dataclass(frozen=True)
class UniformRange:
    low: IntExpr
    high: IntExpr


@dataclass(frozen=True)
class Bernoulli:
    p: Fraction


@dataclass(frozen=True)
class Dirac:
    expr: IntExpr


@dataclass(frozen=True)
class Discrete:
    entries: tuple[tuple[IntExpr, Fraction], ...]


DistExpr = Union[UniformTo, UniformRange, Bernoulli, Dirac, Discrete]


# -- commands ---------------------------------------------------------------

@dataclass(frozen=True)
class Assign:
    var: str
    expr: IntExpr


@dataclass(frozen=True)
class Sample:
    var: str
    dist: DistExpr


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Seq:
    first: Command
    second: Command


@dataclass(frozen=True)
class If:
    cond: BoolExpr
    then: Command
    orelse: Command


@dataclass(frozen=True)
class While:
    cond: BoolExpr
    body: Command


Command = Union[Assign, Sample, Skip, Seq, If, While]


def seq(*commands: Command) -> Command:
    """Right-nested sequence; ``seq()`` is ``skip``."""
    if not commands:
        return Skip()
    result = commands[-1]
    for c in reversed(commands[:-1]):
        result = Seq(c, result)
    return result


# -- static analyses --------------------------------------------------------

def vars_of(node) -> frozenset[str]:
    """Variables occurring in an expression (integer, boolean or distribution)."""
    match node:
        case Lit() | BoolLit() | Bernoulli():
            return frozenset()
        case Var(name):
            return frozenset([name])
        case Neg(arg) | Not(arg) | UniformTo(arg) | Dirac(arg):
            return vars_of(arg)
        case BinOp(_, left, right) | Cmp(_, left, right) | BoolOp(_, left, right):
            return vars_of(left) | vars_of(right)
        case UniformRange(low, high):
            return vars_of(low) | vars_of(high)
        case Discrete(entries):
            return frozenset().union(*(vars_of(e) for e, _ in entries))
    raise TypeError(f"not an expression: {node!r}")


def mv(c: Command) -> frozenset[str]:
    """Variables a command may modify."""
    match c:
        case Assign(var, _) | Sample(var, _):
            return frozenset([var])
        case Skip():
            return frozenset()
        case Seq(c1, c2) | If(_, c1, c2):
            return mv(c1) | mv(c2)
        case While(_, body):
            return mv(body)
    raise TypeError(f"not a command: {c!r}")


# -- printing ---------------------------------------------------------------

_INT_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "mod": 2}
_BOOL_PREC = {"||": 1, "&&": 2}


def _int_prec(e: IntExpr) -> int:
    if isinstance(e, BinOp) and e.op in _INT_PREC:
        return _INT_PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 4


def _int_str(e: IntExpr, need: int = 0) -> str:
    match e:
        case Lit(v):
            s = str(v)
            # A negative literal behaves like a negation when printed.
            return f"({s})" if v < 0 and need >= 3 else s
        case Var(name):
            return name
        case Neg(arg):
            s = "-" + _int_str(arg, 3)
        case BinOp("min" | "max" as op, left, right):
            return f"{op}({_int_str(left)}, {_int_str(right)})"
        case BinOp(op, left, right):
            p = _INT_PREC[op]
            s = f"{_int_str(left, p)} {op} {_int_str(right, p + 1)}"
        case _:
            raise TypeError(f"not an integer expression: {e!r}")
    return f"({s})" if _int_prec(e) < need else s


def _bool_str(b: BoolExpr, need: int = 0) -> str:
    match b:
        case BoolLit(v):
            return "true" if v else "false"
        case Cmp(op, left, right):
            s, p = f"{_int_str(left)} {op} {_int_str(right)}", 4
        case Not(arg):
            s, p = "!" + _bool_str(arg, 3), 3
        case BoolOp(op, left, right):
            p = _BOOL_PREC[op]
            s = f"{_bool_str(left, p)} {op} {_bool_str(right, p + 1)}"
        case _:
            raise TypeError(f"not a boolean expression: {b!r}")
    return f"({s})" if p < need else s


def _dist_str(d: DistExpr) -> str:
    match d:
        case UniformTo(bound):
            return f"uniform({_int_str(bound)})"
        case UniformRange(low, high):
            return f"uniform({_int_str(low)}, {_int_str(high)})"
        case Bernoulli(p):
            return f"bernoulli({p})"
        case Dirac(e):
            return f"dirac({_int_str(e)})"
        case Discrete(entries):
            return "discrete{" + ", ".join(f"{_int_str(e)}: {q}" for e, q in entries) + "}"
    raise TypeError(f"not a distribution expression: {d!r}")


def _flatten(c: Command) -> list[Command]:
    if isinstance(c, Seq):
        return _flatten(c.first) + _flatten(c.second)
    return [c]


def _cmd_lines(c: Command, indent: int) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    parts = _flatten(c)
    for i, part in enumerate(parts):
        sep = ";" if i < len(parts) - 1 else ""
        match part:
            case Assign(var, e):
                lines.append(f"{pad}{var} := {_int_str(e)}{sep}")
            case Sample(var, d):
                lines.append(f"{pad}{var} ~ {_dist_str(d)}{sep}")
            case Skip():
                lines.append(f"{pad}skip{sep}")
            case If(cond, then, orelse):
                lines.append(f"{pad}if {_bool_str(cond)} then {{")
                lines += _cmd_lines(then, indent + 1)
                lines.append(f"{pad}}} else {{")
                lines += _cmd_lines(orelse, indent + 1)
                lines.append(f"{pad}}}{sep}")
            case While(cond, body):
                lines.append(f"{pad}while {_bool_str(cond)} do {{")
                lines += _cmd_lines(body, indent + 1)
                lines.append(f"{pad}}}{sep}")
            case _:
                raise TypeError(f"not a command: {part!r}")
    return lines


def pretty(node, *, multiline: bool = False) -> str:
    """Canonical concrete syntax for any AST node.

    Commands print on one line unless ``multiline`` is set.  Sequencing is
    printed flat, so ``(a; b); c`` and ``a; (b; c)`` print identically.
    """
    if isinstance(node, (Lit, Var, Neg, BinOp)):
        return _int_str(node)
    if isinstance(node, (BoolLit, Cmp, Not, BoolOp)):
        return _bool_str(node)
    if isinstance(node, (UniformTo, UniformRange, Bernoulli, Dirac, Discrete)):
        return _dist_str(node)
    lines = _cmd_lines(node, 0)
    if multiline:
        return "\n".join(lines)
    return " ".join(line.strip() for line in lines)
