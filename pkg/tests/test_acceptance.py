"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are also
collected into an "acceptance criteria" section of the terminal summary.
"""

import json
import random
import time
from fractions import Fraction as F
from pathlib import Path

import corpus
import harness
from acceptance_log import record
from strategies import brute_independent

from pslab.assertions import (
    Sat, conj, disj, implies, make_cond, make_det, make_event, make_sep, make_sim, neg,
)
from pslab.cli import main
from pslab.lang import Var, mv, parse_program
from pslab.prob import (
    SampleFamily, cond_independent, condition, distribution_of, independent, refine,
)
from pslab.semantics import (
    Mode, NotTerminatingError, absorption_solve, analyze, explore, mask_path, run_random,
    terminal_paths,
)
from pslab.state import (
    State, mask, parse_random_state, random_is_total, random_restrict, restrict,
)

SPECS = Path(__file__).resolve().parent.parent / "demos" / "specs"
R = parse_random_state
TRIALS = 200


def cli(capsys, *argv):
    code = main([str(a) for a in argv] + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def gate(number, ok, text):
    record(number, ok, text)
    assert ok, text


# 1 ----------------------------------------------------------------------------------

def test_criterion_1_safety_counterexample(capsys):
    t = time.perf_counter()
    code, report = cli(capsys, "check", SPECS / "parity.spec")
    _, unsafe = cli(capsys, "check", SPECS / "parity.spec", "--unsafe")
    elapsed = time.perf_counter() - t
    safe_v = report["verdict"]
    ok = (
        report["spec"] == "{top} X := X mod 2 {[X = 0 || X = 1]}"
        and safe_v["outcome"] == "fails" and safe_v["reason"] == "safety-violation"
        and safe_v["witness"]["input"] == "1 {}" and code == 1
        and unsafe["verdict"]["outcome"] == "holds" and elapsed < 1
    )
    gate(1, ok, f"Fails(safety-violation) on 1 {{}}, Holds with --unsafe ({elapsed * 1000:.1f} ms)")


# 2 ----------------------------------------------------------------------------------

def test_criterion_2_tightness_failure(capsys):
    code, report = cli(capsys, "tightness", SPECS / "parity_tight.spec", "--unsafe")
    v = report["verdict"]
    ok = (
        code == 1 and v["outcome"] == "fails"
        and v["witness"]["input"] == "1/2 {X:0} + 1/2 {X:1}"
        and v["witness"]["terminal"] == "1/2 {X:0} + 1/2 {X:1}"
        and report["partial"]["outcome"] == "holds"
    )
    gate(2, ok, f"tightness {v['outcome']} ({v['reason']}), terminal {v['witness'].get('terminal')}")


# 3 ----------------------------------------------------------------------------------

def test_criterion_3_frame_violation(capsys):
    code, report = cli(capsys, "check", SPECS / "parity_framed.spec", "--unsafe")
    v = report["verdict"]
    ind = v["witness"].get("independence", {})
    framed_ok = (
        report["spec"] == "{top * [Y = 0 || Y = 1]} X := X mod 2 {[X = 0 || X = 1] * [Y = 0 || Y = 1]}"
        and code == 1 and v["reason"] == "postcondition-false"
        and ind.get("left_footprint") == ["X"] and ind.get("right_footprint") == ["Y"]
        and ind["cell"]["joint"] == "1/2" and ind["cell"]["product"] == "1/4"
    )
    code, search = cli(capsys, "search", SPECS / "parity_framed.spec", "--unsafe",
                       "--vars", "X,Y", "--values", "0,1", "--denominator", "2")
    search_ok = code == 1 and search["witness"] == "1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}"
    gate(3, framed_ok and search_ok,
         f"framed spec {v['reason']} with non-independence witness; search found {search['witness']}")


# 4 ----------------------------------------------------------------------------------

def test_criterion_4_frame_soundness():
    t = time.perf_counter()
    premises = frames = witnesses = 0
    violations = []
    for seed in range(TRIALS):
        rep = harness.frame_trial(seed)
        premises += rep.premise is not None
        frames += rep.frame is not None
        witnesses += rep.witnesses
        violations += rep.violations
    elapsed = time.perf_counter() - t
    ok = not violations and elapsed < 300 and frames > 0 and witnesses > 0
    gate(4, ok, f"{TRIALS} programs, {premises} valid premises, {frames} frames, "
                f"{witnesses} framed witnesses, {len(violations)} violations ({elapsed:.0f} s)")


# 5 ----------------------------------------------------------------------------------

def test_criterion_5_relative_tightness():
    premises = checks = 0
    violations = []
    for seed in range(TRIALS):
        rep = harness.tightness_trial(seed)
        premises += rep.premise is not None
        checks += rep.tight_checks
        violations += rep.tightness_violations
    ok = not violations and checks > 0
    gate(5, ok, f"{premises} valid specs, {checks} terminating witnesses, {len(violations)} violations")


# 6 ----------------------------------------------------------------------------------

def _family(rng):
    n = rng.randint(1, 8)
    ws = corpus.dyadic_weights(rng, n)
    return SampleFamily(
        (w, (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 1))) for w in ws
    )


def _first(v):
    return v[0]


def _second(v):
    return v[1]


def _third(v):
    return v[2]


POSTCOMPOSE = (lambda b: b % 2, lambda b: 0, lambda b: b > 0, lambda b: -b, lambda b: min(b, 1))


def test_criterion_6_probability_laws():
    rng = random.Random(6)
    families = 0
    bad = []
    for _ in range(1000):
        s = _family(rng)
        families += 1
        ind = independent(s, _first, _second)
        if ind != brute_independent(s, _first, _second):
            bad.append(("oracle", s))
        # postcomposition keeps independence
        if ind:
            for h in POSTCOMPOSE:
                if not brute_independent(s, _first, lambda v: h(v[1])):
                    bad.append(("postcompose", s))
        # independence as invariance of the conditionals
        conds = {distribution_of(condition(s, _second, b).map(_first))
                 for b in distribution_of(s.map(_second))}
        if ind != (len(conds) == 1):
            bad.append(("conditionals", s))
        # contraction
        if cond_independent(s, _first, _second, _third) and independent(s, _first, _third):
            if not brute_independent(s, _first, lambda v: (v[1], v[2])):
                bad.append(("contraction", s))

    # Masking lemma by path replay.
    pairs = paths = 0
    for seed in range(200):
        prng = random.Random(10_000 + seed)
        c = corpus.program(prng)
        s0 = corpus.state(prng, ("X", "Y"))
        s = corpus.state(prng, ("X", "Y", "Z"))
        pairs += 1
        for path in terminal_paths(c, s0, 40):
            paths += 1
            masked = mask_path(s, path)
            if not (masked.is_valid() and masked.probability == path.probability
                    and masked.configs[0].state == mask(s, s0)):
                bad.append(("mask", c, s0, s))

    # Preservation of unmodified variables, pointwise and as random states.
    runs = 0
    for seed in range(200):
        prng = random.Random(20_000 + seed)
        c = corpus.program(prng)
        rs = corpus.random_state(prng, ("X", "Y", "Z"), partial=False)
        keep = {"X", "Y", "Z"} - mv(c)
        for s in rs.values:
            r = analyze(c, s, Mode.absorb(1000))
            if r.exact and any(restrict(t, keep) != restrict(s, keep) for t in r.terminal):
                bad.append(("preserve-point", c, s))
        try:
            run = run_random(c, rs, Mode.absorb(1000))
        except NotTerminatingError:
            continue
        runs += 1
        if random_restrict(run.final, keep) != random_restrict(run.pull(), keep):
            bad.append(("preserve-random", c, rs))
    gate(6, not bad, f"{families} families (postcomposition, conditionals, contraction), {pairs} masking pairs / {paths} paths, "
                     f"{runs} terminating runs for preservation; {len(bad)} violations")


# 7 ----------------------------------------------------------------------------------

def _former(kind, rng, vs):
    def sub():
        return corpus.assertion(rng, vs, 1)
    x = Var(rng.choice(vs))
    return {
        "event": lambda: make_event(corpus.bool_expr(rng, vs, 2)),
        "sim": lambda: make_sim(x, corpus.dist_expr(rng, vs)),
        "det": lambda: make_det(corpus.int_expr(rng, vs, 2)),
        "not": lambda: neg(sub()),
        "and": lambda: conj(sub(), sub()),
        "or": lambda: disj(sub(), sub()),
        "implies": lambda: implies(sub(), sub()),
        "cond": lambda: make_cond(corpus.int_expr(rng, vs, 1), sub()),
        "sep": lambda: make_sep(sub(), sub()),
    }[kind]()


FORMERS = ("event", "sim", "det", "not", "and", "or", "implies", "cond", "sep")


def test_criterion_7_sa_contracts():
    rng = random.Random(7)
    vs = list(corpus.VARS)
    cases = 0
    bad = []
    for kind in FORMERS:
        for _ in range(500):
            a = _former(kind, rng, vs)
            rs = corpus.random_state(rng, corpus.VARS, 4)
            v = a.evaluate(rs)
            cases += 1
            if (v is not Sat.UNDEF) != random_is_total(rs, a.fv):
                bad.append(("SA2", kind, str(a), str(rs)))
            bigger = corpus.extend(rng, rs)
            if v is not Sat.UNDEF and a.evaluate(bigger) is not v:
                bad.append(("SA1", kind, str(a), str(rs)))
            splits = [rng.randint(1, 3) for _ in rs.points]
            if a.evaluate(refine(rs, lambda i: splits[i])) is not v:
                bad.append(("SA3", kind, str(a), str(rs)))
    gate(7, not bad, f"{len(FORMERS)} formers x 500 = {cases} cases; {len(bad)} violations")


# 8 ----------------------------------------------------------------------------------

def test_criterion_8_exact_absorption():
    analyze.cache_clear()
    t = time.perf_counter()
    geo = absorption_solve(parse_program("while X=1 do X ~ bernoulli(1/2)"), State({"X": 1}), 10000)
    t_geo = time.perf_counter() - t
    t = time.perf_counter()
    spin = absorption_solve(parse_program("while true do skip"), State({}), 10000)
    t_spin = time.perf_counter() - t
    ok = (
        geo.exact and dict(geo.terminal) == {State({"X": 0}): F(1)} and geo.terminal_mass == 1
        and geo.fault_mass == 0 and geo.residual_mass == 0
        and spin.exact and spin.residual_mass == 1 and spin.terminal_mass == 0 and spin.fault_mass == 0
        and t_geo < 1 and t_spin < 1
    )
    gate(8, ok, f"geometric loop -> {{X:0}}: {geo.terminal_mass} ({t_geo * 1000:.1f} ms); "
                f"while true -> divergence {spin.residual_mass} ({t_spin * 1000:.1f} ms)")


# 9 ----------------------------------------------------------------------------------

LOOPS = [
    "while X = 1 do X ~ bernoulli(1/2)",
    "while true do skip",
    "while 0 < X && X < 3 do { C ~ bernoulli(1/3); X := X + 2 * C - 1 }",
    "while X < 4 do { C ~ uniform(0, 1); X := X + C }",
    "while X = 1 do { X ~ discrete{0: 1/4, 1: 1/2, 2: 1/4}; if X = 2 then { Y := Y / 0 } }",
]


def test_criterion_9_mass_conservation():
    rng = random.Random(9)
    explorations = 0
    bad = []

    def check(r):
        nonlocal explorations
        explorations += 1
        if r.terminal_mass + r.fault_mass + r.residual_mass != 1:
            bad.append(r)

    for i in range(300):
        c = corpus.program(rng)
        s = corpus.state(rng, ("X", "Y"))
        check(explore(c, s, rng.randint(0, 8)))
        check(absorption_solve(c, s, 1000))
    for text in LOOPS:
        c = parse_program(text)
        for s in (State({"X": 1, "Y": 0, "C": 0}), State({"X": 0}), State({})):
            for budget in range(0, 15):
                check(explore(c, s, budget))
            check(absorption_solve(c, s, 1000))
            check(absorption_solve(c, s, 3, fallback_budget=5))
    gate(9, not bad, f"{explorations} explorations, {len(bad)} with terminal + fault + residual != 1")


if __name__ == "__main__":
    import sys

    import pytest
    sys.exit(pytest.main([__file__, "-q"]))
