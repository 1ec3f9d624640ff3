import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

import corpus
from strategies import seeds

from pslab.assertions import TOP, parse_assertion
from pslab.lang import parse_program
from pslab.semantics import Mode
from pslab.speccheck import (
    FrameError, Outcome, Reason, SearchSpace, Spec, apply_frame, check_partial,
    check_relative_tightness, check_total, frame_side_condition, search_counterexample,
)
from pslab.specfile import parse_triple
from pslab.state import parse_random_state, parse_state

A = parse_assertion
P = parse_program
R = parse_random_state
T = parse_triple

PARITY = T("{top} X := X mod 2 {[X=0 || X=1]}")
PARITY_GUARDED = T("{[X=0 || X=1]} X := X mod 2 {[X=0 || X=1]}")
HALVES = R("1/2 {X:0} + 1/2 {X:1}")
COPIES = R("1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}")
GEOMETRIC = T("{[X=0 || X=1]} while X=1 do X ~ bernoulli(1/2) {[X=0]}")
ABSORB = Mode.absorb(1000)


# -- partial and total correctness -----------------------------------------------------

def test_safety_counterexample():
    v = check_partial(PARITY, R("1 {}"))
    assert v.outcome is Outcome.FAILS and v.reason is Reason.SAFETY
    assert v.witness["state"] == "{}" and v.witness["path"]
    assert check_partial(PARITY, R("1 {}"), safety=False).holds


def test_partial_examples():
    assert check_partial(PARITY_GUARDED, HALVES).holds
    assert check_partial(T("{top} skip {top}"), R("1 {}")).holds


def test_precondition_failures():
    v = check_partial(PARITY_GUARDED, R("1 {Y:0}"))
    assert v.reason is Reason.PRECONDITION_UNDEFINED
    v = check_partial(PARITY_GUARDED, R("1 {X:4}"))
    assert v.reason is Reason.PRECONDITION_FALSE


def test_postcondition_failures_carry_terminal_distribution():
    v = check_partial(T("{top} X ~ bernoulli(1/2) {[X=0]}"), R("1 {}"))
    assert v.reason is Reason.POSTCONDITION_FALSE
    assert v.witness["terminal"] == "1/2 {X:0} + 1/2 {X:1}"
    v = check_partial(T("{top} X := 0 {[Y=0]}"), R("1 {}"))
    assert v.reason is Reason.POSTCONDITION_UNDEFINED and v.witness["undefined"] == ["Y"]


def test_total_examples():
    assert check_total(GEOMETRIC, R("1 {X:1}"), ABSORB).holds
    v = check_total(T("{top} while true do skip {top}"), R("1 {}"), ABSORB)
    assert v.reason is Reason.NONTERMINATION
    # Partial correctness is vacuous on divergence.
    assert check_partial(T("{top} while true do skip {[X=7]}"), R("1 {}"), ABSORB).holds
    v = check_total(PARITY, R("1 {}"))
    assert v.reason is Reason.SAFETY
    assert check_total(PARITY, R("1 {}"), safety=False).reason is Reason.NONTERMINATION


def test_bounded_mode_reports_unknown_with_residual():
    v = check_partial(GEOMETRIC, R("1 {X:1}"), Mode.bounded(5))
    assert v.outcome is Outcome.UNKNOWN and v.residual == F(1, 4)
    assert str(v).startswith("Unknown(")


def test_arithmetic_fault_violates_safety():
    v = check_partial(T("{[X=0 || X=1]} Y := 1 / X {top}"), HALVES)
    assert v.reason is Reason.SAFETY and "division-by-zero" in v.witness["fault"]


@given(seeds)
@settings(max_examples=100)
def test_total_implies_partial(seed):
    rng = random.Random(seed)
    c = corpus.program(rng)
    spec = Spec(corpus.assertion(rng, ["X", "Y"], 1), c, corpus.assertion(rng, ["X", "Y"], 1))
    rs = corpus.random_state(rng, ("X", "Y"), 2)
    for safety in (True, False):
        if check_total(spec, rs, ABSORB, safety=safety).holds:
            assert check_partial(spec, rs, ABSORB, safety=safety).holds


# -- frame rule -------------------------------------------------------------------

def test_side_condition():
    c = P("X := X mod 2")
    assert frame_side_condition(A("[Y=0 || Y=1]"), c)
    assert not frame_side_condition(A("[X=0]"), P("X := 1"))
    assert frame_side_condition(TOP, c)


def test_apply_frame():
    framed = apply_frame(PARITY_GUARDED, A("[Y=0 || Y=1]"))
    assert str(framed) == "{[X = 0 || X = 1] * [Y = 0 || Y = 1]} X := X mod 2 {[X = 0 || X = 1] * [Y = 0 || Y = 1]}"
    assert str(apply_frame(PARITY, TOP)) == "{top * top} X := X mod 2 {[X = 0 || X = 1] * top}"
    with pytest.raises(FrameError) as info:
        apply_frame(T("{top} X := 1 {top}"), A("[X=0]"))
    assert info.value.offending == {"X"}


def test_frame_violation_without_safety():
    framed = apply_frame(PARITY, A("[Y=0 || Y=1]"))
    v = check_partial(framed, COPIES, safety=False)
    assert v.reason is Reason.POSTCONDITION_FALSE
    ind = v.witness["independence"]
    assert ind["left_footprint"] == ["X"] and ind["right_footprint"] == ["Y"]
    assert ind["cell"]["joint"] != ind["cell"]["product"]
    # The same input fails with safety too, but then the premise itself is
    # already refuted at the empty state, so the frame rule does not apply.
    assert check_partial(framed, COPIES).fails
    assert check_partial(PARITY, R("1 {}")).fails


def test_framed_guarded_spec_holds_on_correlated_input():
    framed = apply_frame(PARITY_GUARDED, A("[Y=0 || Y=1]"))
    assert check_partial(framed, COPIES).reason is Reason.PRECONDITION_FALSE
    product = R("1/4 {X:0, Y:0} + 1/4 {X:0, Y:1} + 1/4 {X:1, Y:0} + 1/4 {X:1, Y:1}")
    assert check_partial(framed, product).holds


# -- relative tightness --------------------------------------------------------------

def test_tightness_examples():
    assert check_relative_tightness(PARITY_GUARDED, HALVES).holds
    v = check_relative_tightness(PARITY, HALVES)
    assert v.reason is Reason.DEPENDENCE
    assert v.witness["terminal"] == "1/2 {X:0} + 1/2 {X:1}"
    assert v.witness["given"] == "{}"
    skip = T("{[X=0 || X=1] * det(Y)} skip {[X=0 || X=1] * det(Y)}")
    assert check_relative_tightness(skip, R("1/2 {X:0, Y:3} + 1/2 {X:1, Y:3}")).holds


def test_tightness_of_fresh_randomness():
    spec = T("{det(Y)} X ~ bernoulli(1/2) {X ~ bernoulli(1/2)}")
    assert check_relative_tightness(spec, R("1/2 {Y:0, Z:0} + 1/2 {Y:0, Z:1}")).holds
    spec = T("{top} X ~ bernoulli(1/2); Y := X {X ~ bernoulli(1/2)}")
    assert check_relative_tightness(spec, R("1 {}")).holds


def test_tightness_reports_nontermination():
    spec = T("{top} while true do skip {top}")
    assert check_relative_tightness(spec, R("1 {}"), ABSORB).reason is Reason.NONTERMINATION
    v = check_relative_tightness(GEOMETRIC, R("1 {X:1}"), Mode.bounded(3))
    assert v.outcome is Outcome.UNKNOWN


# -- search ---------------------------------------------------------------------------

def test_search_space_enumeration():
    space = SearchSpace(("X", "Y"), (0, 1), denominator=2, max_points=2)
    cands = list(space.candidates())
    assert len(cands) == 4 + 6 == space.size()
    assert str(cands[0]) == "1 {X:0, Y:0}"
    assert str(cands[4]) == "1/2 {X:0, Y:0} + 1/2 {X:0, Y:1}"
    partial = SearchSpace(("X",), (0, 1), denominator=4, max_points=3, partial=True)
    # states {}, {X:0}, {X:1}; weights: 1 + 3 compositions per pair * 3 pairs + 3 for the triple
    assert partial.size() == 3 + 9 + 3
    assert SearchSpace((), (), 2, 2).size() == 1
    assert SearchSpace(("X",), (), 2, 2).size() == 0


def test_search_finds_frame_counterexample():
    framed = apply_frame(PARITY, A("[Y=0 || Y=1]"))
    space = SearchSpace(("X", "Y"), (0, 1), denominator=2, max_points=2)
    result = search_counterexample(framed, space, safety=False)
    assert str(result.witness) == "1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}"
    assert result.verdict.reason is Reason.POSTCONDITION_FALSE


def test_search_exhausts_on_valid_spec():
    spec = T("{[X=0]} X := X + 1 {[X=1]}")
    space = SearchSpace(("X", "Y"), (0, 1, 2), denominator=4, max_points=2, partial=True)
    result = search_counterexample(spec, space)
    assert not result.found and result.candidates == space.size()
    assert result.summary().startswith(f"0 failures / {space.size()} candidates")


def test_search_vacuous_and_empty():
    spec = T("{[X < 0]} X := 1 {[X = 2]}")
    result = search_counterexample(spec, SearchSpace(("X",), (0, 1)))
    assert not result.found and result.checked == 0
    result = search_counterexample(spec, SearchSpace(("X",), ()))
    assert result.summary().startswith("0 failures / 0 candidates")


def test_search_finds_safety_counterexample_with_partial_states():
    space = SearchSpace(("X",), (0, 1), partial=True)
    result = search_counterexample(PARITY, space)
    assert str(result.witness) == "1 {}" and result.verdict.reason is Reason.SAFETY


def test_verdict_rendering():
    assert str(check_partial(PARITY, R("1 {}"))) == "Fails(safety-violation)"
    assert str(check_partial(PARITY_GUARDED, HALVES)) == "Holds"


def test_witness_literals_round_trip():
    framed = apply_frame(PARITY, A("[Y=0 || Y=1]"))
    v = check_partial(framed, COPIES, safety=False)
    again = check_partial(framed, R(v.witness["input"]), safety=False)
    assert again.reason is v.reason and again.witness == v.witness
    assert parse_state(v.witness["independence"]["cell"]["left"]) == parse_state("{X:0}")
