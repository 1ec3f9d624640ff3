"""Hoare triples over random states: partial and total correctness with a
built-in safety guarantee, the frame rule, relative tightness, and
exhaustive counterexample search over finite spaces of random states.

Correctness of a triple quantifies over *all* random states satisfying the
precondition.  Here each check is made against one witness random state;
:func:`search_counterexample` exhausts a finite space of them.
"""

from __future__ import annotations

import enum
import itertools
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .assertions import Assertion, Sat, make_sep
from .lang.syntax import Command, mv, pretty
from .prob import Dist, SampleFamily, condition, distribution_of, independent, sorted_values
from .semantics import (
    DEFAULT_MODE, Mode, NotTerminatingError, RandomRun, Status, is_fault_free,
    is_terminating, run_random,
)
from .state import RandomState, State, random_restrict, restrict

__all__ = [
    "FrameError", "Outcome", "Reason", "SearchResult", "SearchSpace", "Spec",
    "Verdict", "apply_frame", "check_partial", "check_relative_tightness",
    "check_total", "format_dist", "frame_side_condition", "search_counterexample",
]


@dataclass(frozen=True)
class Spec:
    """``{pre} command {post}``; ``frame`` records the frame if one was applied."""

    pre: Assertion
    command: Command
    post: Assertion
    frame: Assertion | None = None

    def __str__(self) -> str:
        return f"{{{self.pre}}} {pretty(self.command)} {{{self.post}}}"


class Outcome(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


class Reason(str, enum.Enum):
    PRECONDITION_UNDEFINED = "precondition-undefined"
    PRECONDITION_FALSE = "precondition-false"
    SAFETY = "safety-violation"
    POSTCONDITION_FALSE = "postcondition-false"
    POSTCONDITION_UNDEFINED = "postcondition-undefined"
    NONTERMINATION = "nontermination"
    DEPENDENCE = "conditional-dependence"


@dataclass(frozen=True)
class Verdict:
    """Result of checking one witness.

    ``witness`` holds JSON-ready diagnostics (strings and lists);
    ``run`` is the terminal random run when one was built.
    """

    outcome: Outcome
    reason: Reason | None = None
    witness: dict[str, Any] = field(default_factory=dict)
    residual: Fraction = Fraction(0)
    where: str = ""
    run: RandomRun | None = field(default=None, compare=False, repr=False)

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    @property
    def unknown(self) -> bool:
        return self.outcome is Outcome.UNKNOWN

    def __str__(self) -> str:
        if self.fails:
            return f"Fails({self.reason.value})"
        if self.unknown:
            return f"Unknown(residual {self.residual}, {self.where})"
        return "Holds"


class FrameError(ValueError):
    def __init__(self, offending: frozenset[str]):
        super().__init__(
            "frame side condition violated: the frame mentions modified variable(s) "
            + ", ".join(sorted(offending))
        )
        self.offending = offending


def format_dist(d: Dist[State]) -> str:
    """Random-state literal for a distribution over states."""
    return " + ".join(f"{d[s]} {s}" for s in sorted(d))


def _table(d: Dist) -> list[list[str]]:
    def show(v):
        if isinstance(v, tuple):
            return " , ".join(str(x) for x in v)
        return str(v)

    return [[show(v), str(d[v])] for v in sorted_values(d)]


# -- witnesses for failed checks --------------------------------------------------

def _dependence(family: SampleFamily, f, g) -> dict[str, Any] | None:
    """Joint and marginal tables plus one offending cell, or None if independent."""
    if independent(family, f, g):
        return None
    joint = distribution_of(family.pair(f, g))
    left = distribution_of(family.map(f))
    right = distribution_of(family.map(g))
    for a in sorted_values(left):
        for b in sorted_values(right):
            if joint.prob((a, b)) != left[a] * right[b]:
                cell = {"left": str(a), "right": str(b), "joint": str(joint.prob((a, b))),
                        "product": str(left[a] * right[b])}
                return {"joint": _table(joint), "left": _table(left),
                        "right": _table(right), "cell": cell}
    raise AssertionError("dependence reported but no offending cell found")


def _explain(post: Assertion, final: RandomState) -> dict[str, Any]:
    """Find why a separating conjunction failed, descending into its left spine."""
    if post.kind != "sep":
        return {}
    phi, psi = post.parts
    if not phi.check(final):
        return _explain(phi, final)
    if not psi.check(final):
        return _explain(psi, final)
    dep = _dependence(final, lambda s: restrict(s, phi.fv), lambda s: restrict(s, psi.fv))
    return {"independence": {"left_footprint": sorted(phi.fv),
                             "right_footprint": sorted(psi.fv), **(dep or {})}}


def _pre_verdict(spec: Spec, rs: RandomState) -> Verdict | None:
    sat = spec.pre.evaluate(rs)
    if sat is Sat.TT:
        return None
    reason = Reason.PRECONDITION_UNDEFINED if sat is Sat.UNDEF else Reason.PRECONDITION_FALSE
    return Verdict(Outcome.FAILS, reason, {"input": str(rs)})


def _safety_verdict(spec: Spec, rs: RandomState, answer) -> Verdict:
    i = answer.point
    witness: dict[str, Any] = {"input": str(rs), "point": i, "state": str(rs.values[i])}
    if answer.witness is not None:
        witness["path"] = answer.witness.render()
        witness["fault"] = answer.witness.reason
    return Verdict(Outcome.FAILS, Reason.SAFETY, witness)


def _post_verdict(spec: Spec, rs: RandomState, run: RandomRun) -> Verdict:
    final = run.final
    if spec.frame is not None:
        # Unmodified footprint of the frame is carried over unchanged.
        fv = spec.frame.fv
        assert random_restrict(final, fv) == random_restrict(run.pull(), fv)
    witness: dict[str, Any] = {"input": str(rs), "terminal": format_dist(distribution_of(final))}
    sat = spec.post.evaluate(final)
    if sat is Sat.TT:
        return Verdict(Outcome.HOLDS, None, witness, run=run)
    if sat is Sat.UNDEF:
        missing = sorted(v for v in spec.post.fv if any(v not in s for s in final.values))
        witness["undefined"] = missing
        return Verdict(Outcome.FAILS, Reason.POSTCONDITION_UNDEFINED, witness, run=run)
    witness.update(_explain(spec.post, final))
    return Verdict(Outcome.FAILS, Reason.POSTCONDITION_FALSE, witness, run=run)


# -- correctness checks --------------------------------------------------------------

def check_partial(spec: Spec, rs: RandomState, mode: Mode = DEFAULT_MODE, *,
                  safety: bool = True) -> Verdict:
    """Partial correctness at one witness.

    With ``safety=False`` the fault-freeness clause is dropped: a run that
    faults is simply not terminating, so the postcondition is not consulted.
    """
    bad = _pre_verdict(spec, rs)
    if bad is not None:
        return bad
    if safety:
        ff = is_fault_free(spec.command, rs, mode)
        if ff.status is Status.NO:
            return _safety_verdict(spec, rs, ff)
        if ff.status is Status.UNKNOWN:
            return Verdict(Outcome.UNKNOWN, residual=ff.residual, where="fault-freeness",
                           witness={"input": str(rs)})
    term = is_terminating(spec.command, rs, mode)
    if term.status is Status.NO:
        return Verdict(Outcome.HOLDS, witness={"input": str(rs), "note": "not terminating"})
    if term.status is Status.UNKNOWN:
        return Verdict(Outcome.UNKNOWN, residual=term.residual, where="termination",
                       witness={"input": str(rs)})
    return _post_verdict(spec, rs, run_random(spec.command, rs, mode))


def check_total(spec: Spec, rs: RandomState, mode: Mode = DEFAULT_MODE, *,
                safety: bool = True) -> Verdict:
    """Total correctness at one witness: termination is required."""
    bad = _pre_verdict(spec, rs)
    if bad is not None:
        return bad
    term = is_terminating(spec.command, rs, mode)
    if term.status is Status.NO:
        if safety and term.faulted:
            return _safety_verdict(spec, rs, term)
        return Verdict(Outcome.FAILS, Reason.NONTERMINATION,
                       {"input": str(rs), "point": term.point,
                        "state": str(rs.values[term.point]),
                        "divergence": str(term.residual)})
    if term.status is Status.UNKNOWN:
        return Verdict(Outcome.UNKNOWN, residual=term.residual, where="termination",
                       witness={"input": str(rs)})
    return _post_verdict(spec, rs, run_random(spec.command, rs, mode))


# -- frame rule ----------------------------------------------------------------------

def frame_side_condition(theta: Assertion, c: Command) -> bool:
    return not (theta.fv & mv(c))


def apply_frame(spec: Spec, theta: Assertion) -> Spec:
    """``{pre * theta} C {post * theta}``, provided C cannot modify theta's footprint."""
    offending = theta.fv & mv(spec.command)
    if offending:
        raise FrameError(offending)
    return Spec(make_sep(spec.pre, theta), spec.command, make_sep(spec.post, theta), frame=theta)


# -- relative tightness ----------------------------------------------------------------

def check_relative_tightness(spec: Spec, rs: RandomState, mode: Mode = DEFAULT_MODE) -> Verdict:
    """Conditional independence of the final state on the postcondition's
    footprint from the initial state, given the initial state on the
    precondition's footprint.

    All three random variables live on the sample space of the terminal run.
    """
    bad = _pre_verdict(spec, rs)
    if bad is not None:
        return bad
    try:
        run = run_random(spec.command, rs, mode)
    except NotTerminatingError as exc:
        if exc.exact or exc.fault_mass:
            return Verdict(Outcome.FAILS, Reason.NONTERMINATION,
                           {"input": str(rs), "fault": str(exc.fault_mass),
                            "divergence": str(exc.residual_mass)})
        return Verdict(Outcome.UNKNOWN, residual=exc.residual_mass, where="termination",
                       witness={"input": str(rs)})

    sources = rs.values
    post_fv, pre_fv = spec.post.fv, spec.pre.fv

    def out(v):
        return restrict(v[1], post_fv)

    def src(v):
        return sources[v[0]]

    def src_pre(v):
        return restrict(sources[v[0]], pre_fv)

    witness: dict[str, Any] = {"input": str(rs), "terminal": format_dist(distribution_of(run.final))}
    for c in sorted_values(distribution_of(run.family.map(src_pre))):
        cell = condition(run.family, src_pre, c)
        dep = _dependence(cell, out, src)
        if dep is not None:
            witness["given"] = str(c)
            witness.update(dep)
            return Verdict(Outcome.FAILS, Reason.DEPENDENCE, witness, run=run)
    return Verdict(Outcome.HOLDS, None, witness, run=run)


# -- search ------------------------------------------------------------------------------

def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers, lexicographically."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class SearchSpace:
    """Random states with at most ``max_points`` distinct states, weights
    on the grid ``k/denominator``, values drawn from ``values``.

    States are total on ``variables`` unless ``partial`` is set, in which
    case every subset of the variables may be bound.
    """

    variables: tuple[str, ...]
    values: tuple[int, ...]
    denominator: int = 2
    max_points: int = 2
    partial: bool = False

    def states(self) -> list[State]:
        if self.partial:
            choices = [(None,) + tuple(self.values)] * len(self.variables)
        else:
            choices = [tuple(self.values)] * len(self.variables)
        out = set()
        for combo in itertools.product(*choices):
            out.add(State((x, v) for x, v in zip(self.variables, combo) if v is not None))
        return sorted(out)

    def candidates(self) -> Iterator[RandomState]:
        """Lexicographic in (point count, states, weights)."""
        states = self.states()
        for n in range(1, self.max_points + 1):
            for combo in itertools.combinations(states, n):
                for ws in _compositions(self.denominator, n):
                    yield RandomState(
                        (Fraction(w, self.denominator), s) for w, s in zip(ws, combo)
                    )

    def size(self) -> int:
        return sum(1 for _ in self.candidates())


@dataclass(frozen=True)
class SearchResult:
    witness: RandomState | None
    verdict: Verdict | None
    candidates: int
    checked: int
    unknown: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    def summary(self) -> str:
        if self.found:
            s = f"1 failure after {self.candidates} candidates ({self.checked} satisfy the precondition"
        else:
            s = f"0 failures / {self.candidates} candidates ({self.checked} satisfy the precondition"
        if self.unknown:
            s += f", {self.unknown} unknown"
        return s + ")"


def search_counterexample(spec: Spec, space: SearchSpace, mode: Mode = DEFAULT_MODE, *,
                          total: bool = False, safety: bool = True) -> SearchResult:
    """First candidate (in the space's order) satisfying the precondition on
    which the check fails; ``witness`` is None when the space is exhausted."""
    check = check_total if total else check_partial
    n = checked = unknown = 0
    for rs in space.candidates():
        n += 1
        if spec.pre.evaluate(rs) is not Sat.TT:
            continue
        checked += 1
        verdict = check(spec, rs, mode, safety=safety)
        if verdict.fails:
            return SearchResult(rs, verdict, n, checked, unknown)
        if verdict.unknown:
            unknown += 1
    return SearchResult(None, None, n, checked, unknown)
