"""The pwhile language: syntax, parsing, evaluation, static analyses."""

from .evaluate import EvalFault, eval_bool, eval_dist, eval_int, is_defined
from .parser import (
    ParseError, parse_bool_expr, parse_dist_expr, parse_int_expr, parse_program,
)
from .syntax import (
    Assign, Bernoulli, BinOp, BoolExpr, BoolLit, BoolOp, Cmp, Command, Dirac,
    Discrete, DistExpr, If, IntExpr, Lit, Neg, Not, Sample, Seq, Skip,
    UniformRange, UniformTo, Var, While, mv, pretty, seq, vars_of,
)

__all__ = [
    "Assign", "Bernoulli", "BinOp", "BoolExpr", "BoolLit", "BoolOp", "Cmp",
    "Command", "Dirac", "Discrete", "DistExpr", "EvalFault", "If", "IntExpr",
    "Lit", "Neg", "Not", "ParseError", "Sample", "Seq", "Skip", "UniformRange",
    "UniformTo", "Var", "While", "eval_bool", "eval_dist", "eval_int",
    "is_defined", "mv", "parse_bool_expr", "parse_dist_expr", "parse_int_expr",
    "parse_program", "pretty", "seq", "vars_of",
]
