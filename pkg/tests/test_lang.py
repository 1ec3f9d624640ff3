import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import corpus
from strategies import programs, seeds

from pslab.lang import (
    Assign, Bernoulli, BinOp, BoolLit, Cmp, Dirac, Discrete, EvalFault, If, Lit,
    ParseError, Sample, Seq, Skip, UniformRange, UniformTo, Var, While, eval_bool,
    eval_dist, eval_int, mv, parse_bool_expr, parse_dist_expr, parse_int_expr,
    parse_program, pretty, seq, vars_of,
)
from pslab.state import State, parse_state

S = parse_state
small_states = st.dictionaries(st.sampled_from("XYZ"), st.integers(-4, 4)).map(State)


# -- parsing ---------------------------------------------------------------------

def test_parse_examples():
    assert parse_program("X := X mod 2") == Assign("X", BinOp("mod", Var("X"), Lit(2)))
    assert parse_program("skip") == Skip()
    assert parse_program("X ~ uniform(0,1); Y := X") == Seq(
        Sample("X", UniformRange(Lit(0), Lit(1))), Assign("Y", Var("X")))


def test_sequencing_is_right_associative():
    c = parse_program("X := 1; Y := 2; Z := 3")
    assert c == Seq(Assign("X", Lit(1)), Seq(Assign("Y", Lit(2)), Assign("Z", Lit(3))))


def test_blocks_comments_and_bare_bodies():
    text = """
    # geometric loop
    X := 1;
    while X = 1 do {
        X ~ bernoulli(1/2)   # flip
    }
    """
    c = parse_program(text)
    assert c == seq(Assign("X", Lit(1)), While(Cmp("=", Var("X"), Lit(1)), Sample("X", Bernoulli(F(1, 2)))))
    assert parse_program("while X = 1 do X ~ bernoulli(1/2)") == c.second
    assert parse_program("if X < 0 then { X := 0 }") == If(Cmp("<", Var("X"), Lit(0)), Assign("X", Lit(0)), Skip())


def test_expression_precedence():
    assert parse_int_expr("1 + 2 * X") == BinOp("+", Lit(1), BinOp("*", Lit(2), Var("X")))
    assert parse_int_expr("(1 + 2) * X") == BinOp("*", BinOp("+", Lit(1), Lit(2)), Var("X"))
    assert parse_int_expr("X - Y - Z") == BinOp("-", BinOp("-", Var("X"), Var("Y")), Var("Z"))
    assert parse_bool_expr("X = 0 || X = 1 && Y < 2") == parse_bool_expr("X = 0 || (X = 1 && Y < 2)")
    assert parse_bool_expr("true") == BoolLit(True)


def test_distribution_literals():
    assert parse_dist_expr("uniform(X)") == UniformTo(Var("X"))
    assert parse_dist_expr("dirac(X + 1)") == Dirac(BinOp("+", Var("X"), Lit(1)))
    assert parse_dist_expr("discrete{0: 1/3, 9: 2/3}") == Discrete(((Lit(0), F(1, 3)), (Lit(9), F(2, 3))))


@pytest.mark.parametrize("text", [
    "X :=", "X := 1 +", "while X do skip", "X ~ bernoulli(3/2)", "X ~ discrete{0: 1/2}",
    "X ~ discrete{0: 0, 1: 1}", "if X = 1 then { skip } else", "X := 1;;", "x y", "X := 1 }",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_program(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_program("X := 1;\nY := * 2")
    assert info.value.line == 2
    assert info.value.column == 6


@given(programs())
def test_pretty_parse_round_trip(c):
    assert parse_program(pretty(c)) == c
    assert parse_program(pretty(c, multiline=True)) == c
    assert pretty(parse_program(pretty(c))) == pretty(c)


def test_pretty_minimal_parentheses():
    assert pretty(parse_int_expr("(X + 1) * -2")) == "(X + 1) * (-2)"
    assert pretty(parse_int_expr("-2 + X")) == "-2 + X"
    assert pretty(parse_int_expr("X - (Y - Z)")) == "X - (Y - Z)"
    assert pretty(parse_program("if X = 0 then { skip } else { X := 1 }")) == "if X = 0 then { skip } else { X := 1 }"


# -- variables -------------------------------------------------------------------

def test_vars_of_examples():
    assert vars_of(parse_int_expr("X + Y")) == {"X", "Y"}
    assert vars_of(parse_dist_expr("uniform(X)")) == {"X"}
    assert vars_of(parse_int_expr("5")) == set()
    assert vars_of(parse_dist_expr("discrete{X: 1/2, Y + 1: 1/2}")) == {"X", "Y"}


def test_mv_examples():
    assert mv(Skip()) == set()
    assert mv(parse_program("X := Y + Z")) == {"X"}
    assert mv(parse_program("while B = 1 do { X := 1; Y ~ dirac(0) }")) == {"X", "Y"}
    assert mv(parse_program("if X = 0 then { Y := 1 } else { Z ~ bernoulli(1/2) }")) == {"Y", "Z"}


def test_mv_is_invariant_under_reassociation():
    a, b, c = (parse_program(t) for t in ("X := 1", "Y ~ bernoulli(1/2)", "skip"))
    assert mv(Seq(Seq(a, b), c)) == mv(Seq(a, Seq(b, c))) == {"X", "Y"}


@given(programs())
def test_mv_covers_subcommands(c):
    def subs(cmd):
        yield cmd
        for child in getattr(cmd, "__dict__", {}).values():
            if isinstance(child, (Seq, If, While, Assign, Sample, Skip)):
                yield from subs(child)
    for sub in subs(c):
        assert mv(sub) <= mv(c)


# -- evaluation ------------------------------------------------------------------

def test_eval_int_examples():
    assert eval_int(parse_int_expr("X mod 2"), S("{X:5}")) == 1
    assert eval_int(parse_int_expr("X mod 2"), S("{}")) is None
    assert eval_int(parse_int_expr("min(0, X)"), S("{X:-3}")) == -3
    assert eval_int(parse_int_expr("X / 2"), S("{X:-7}")) == -4
    assert eval_int(parse_int_expr("X mod -3"), S("{X:7}")) == -2
    assert eval_int(parse_int_expr("-X * 10000000000000000000"), S("{X:10000000000}")) == -10 ** 29


def test_eval_bool_examples():
    assert eval_bool(parse_bool_expr("X = Y"), S("{X:1, Y:1}")) is True
    assert eval_bool(parse_bool_expr("X = Y"), S("{X:1}")) is None
    assert eval_bool(parse_bool_expr("true"), S("{}")) is True
    # Both operands must be defined, even when the left one decides.
    assert eval_bool(parse_bool_expr("true || X = 1"), S("{}")) is None


def test_eval_dist_examples():
    assert eval_dist(parse_dist_expr("uniform(X)"), S("{X:1}")) == {0: F(1, 2), 1: F(1, 2)}
    assert eval_dist(parse_dist_expr("uniform(X)"), S("{X:-2}")) == {-2: F(1, 3), -1: F(1, 3), 0: F(1, 3)}
    assert eval_dist(parse_dist_expr("dirac(X + 1)"), S("{X:4}")) == {5: 1}
    assert eval_dist(parse_dist_expr("discrete{0: 1/3, 9: 2/3}"), S("{}")) == {0: F(1, 3), 9: F(2, 3)}
    assert eval_dist(parse_dist_expr("discrete{X: 1/2, 1: 1/2}"), S("{X:1}")) == {1: 1}
    assert eval_dist(parse_dist_expr("bernoulli(0)"), S("{}")) == {0: 1}
    assert eval_dist(parse_dist_expr("uniform(X)"), S("{}")) is None


@pytest.mark.parametrize("text, kind", [
    ("X / 0", "division-by-zero"), ("X mod (X - X)", "division-by-zero"),
])
def test_arithmetic_faults(text, kind):
    with pytest.raises(EvalFault) as info:
        eval_int(parse_int_expr(text), S("{X:3}"))
    assert info.value.kind == kind


def test_invalid_uniform_range_faults():
    with pytest.raises(EvalFault) as info:
        eval_dist(parse_dist_expr("uniform(X, 0)"), S("{X:1}"))
    assert info.value.kind == "invalid-parameter"


def _defined(fn, e, s):
    try:
        return fn(e, s) is not None
    except EvalFault:
        return True


@given(seeds, small_states)
def test_definedness_is_variable_coverage(seed, s):
    rng = random.Random(seed)
    e = corpus.int_expr(rng, ("X", "Y", "Z"), 3)
    b = corpus.bool_expr(rng, ("X", "Y", "Z"), 2)
    d = corpus.dist_expr(rng, ("X", "Y", "Z"))
    for fn, node in ((eval_int, e), (eval_bool, b), (eval_dist, d)):
        assert _defined(fn, node, s) == (vars_of(node) <= s.domain)


@given(seeds, small_states, small_states)
def test_evaluation_is_monotone(seed, s, extra):
    rng = random.Random(seed)
    e = corpus.int_expr(rng, ("X", "Y", "Z"), 3)
    bigger = State({**extra, **s})
    value = eval_int(e, s)
    if value is not None:
        assert eval_int(e, bigger) == value
