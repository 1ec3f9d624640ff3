"""Small-step probabilistic semantics of pwhile and exact whole-run analysis.

The transition system has three kinds of node: :class:`Nonterminal`
configurations ``(C, sigma)``, :class:`Terminal` states and the single
:data:`FAULT` node.  :func:`step` gives the outgoing transitions of a
nonterminal node.  On top of it:

* :func:`explore` pushes probability mass forward layer by layer for a
  fixed number of transitions and reports what is left over.
* :func:`absorption_solve` enumerates the reachable configuration graph
  and, when it is finite, computes absorption probabilities exactly by
  eliminating nodes over the rationals.
* :func:`run_random` lifts either analysis to random states and builds
  the final random state together with its projection back onto the
  source sample space.
"""

from __future__ import annotations

import enum
import hashlib
from collections import deque
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Union

from .lang.evaluate import EvalFault, eval_bool, eval_dist, eval_int
from .lang.syntax import Assign, Command, If, Sample, Seq, Skip, While, pretty, vars_of
from .prob import Dist, SampleFamily
from .state import RandomState, State, mask, update

__all__ = [
    "Answer", "Config", "ExplorationResult", "FAULT", "Fault", "FaultWitness",
    "Mode", "Nonterminal", "NotTerminatingError", "Path", "RandomRun",
    "SampleLabel", "Status", "StepBranch", "Terminal", "absorption_solve",
    "analyze", "command_hash", "explore", "is_fault_free", "is_terminating",
    "mask_path", "run_random", "step", "terminal_paths", "trace",
]

MAX_WITNESSES = 4


# -- configurations -----------------------------------------------------------

@dataclass(frozen=True)
class Nonterminal:
    command: Command
    state: State


@dataclass(frozen=True)
class Terminal:
    state: State


@dataclass(frozen=True)
class Fault:
    """The error node.  ``reason`` is diagnostic only; all faults are equal."""

    reason: str = field(default="memory", compare=False)


FAULT = Fault()

Config = Union[Nonterminal, Terminal, Fault]


@dataclass(frozen=True)
class SampleLabel:
    value: int
    dist: Dist[int]

    def __str__(self) -> str:
        body = ", ".join(f"{v}: {self.dist[v]}" for v in sorted(self.dist))
        return f"{self.value}~{{{body}}}"


@dataclass(frozen=True)
class StepBranch:
    label: SampleLabel | None
    prob: Fraction
    next: Config


def _fault(reason: str) -> list[StepBranch]:
    return [StepBranch(None, Fraction(1), Fault(reason))]


def _missing(expr, s: State) -> str:
    return "memory fault: " + ", ".join(sorted(vars_of(expr) - s.domain)) + " undefined"


def step(cfg: Config) -> list[StepBranch]:
    """All single transitions out of a nonterminal configuration."""
    if not isinstance(cfg, Nonterminal):
        raise ValueError(f"{cfg!r} has no outgoing transitions")
    c, s = cfg.command, cfg.state
    match c:
        case Assign(var, e):
            try:
                n = eval_int(e, s)
            except EvalFault as exc:
                return _fault(f"{exc.kind}: {exc}")
            if n is None:
                return _fault(_missing(e, s))
            return [StepBranch(None, Fraction(1), Terminal(update(s, var, n)))]
        case Sample(var, d):
            try:
                dist = eval_dist(d, s)
            except EvalFault as exc:
                return _fault(f"{exc.kind}: {exc}")
            if dist is None:
                return _fault(_missing(d, s))
            return [
                StepBranch(SampleLabel(n, dist), dist[n], Terminal(update(s, var, n)))
                for n in sorted(dist)
            ]
        case Skip():
            return [StepBranch(None, Fraction(1), Terminal(s))]
        case Seq(c1, c2):
            out = []
            for br in step(Nonterminal(c1, s)):
                match br.next:
                    case Nonterminal(c1_next, s_next):
                        nxt: Config = Nonterminal(Seq(c1_next, c2), s_next)
                    case Terminal(s_next):
                        nxt = Nonterminal(c2, s_next)
                    case _:
                        nxt = br.next
                out.append(StepBranch(br.label, br.prob, nxt))
            return out
        case If(cond, then, orelse):
            try:
                b = eval_bool(cond, s)
            except EvalFault as exc:
                return _fault(f"{exc.kind}: {exc}")
            if b is None:
                return _fault(_missing(cond, s))
            return [StepBranch(None, Fraction(1), Nonterminal(then if b else orelse, s))]
        case While(cond, body):
            try:
                b = eval_bool(cond, s)
            except EvalFault as exc:
                return _fault(f"{exc.kind}: {exc}")
            if b is None:
                return _fault(_missing(cond, s))
            if b:
                return [StepBranch(None, Fraction(1), Nonterminal(Seq(body, c), s))]
            return [StepBranch(None, Fraction(1), Terminal(s))]
    raise TypeError(f"not a command: {c!r}")


# -- results ------------------------------------------------------------------

@dataclass(frozen=True)
class FaultWitness:
    """A path prefix from the start configuration into the fault node."""

    path: tuple[Config, ...]
    labels: tuple[SampleLabel | None, ...]
    reason: str

    def render(self) -> list[str]:
        lines = []
        for cfg in self.path:
            match cfg:
                case Nonterminal(c, s):
                    lines.append(f"{pretty(c)} , {s}")
                case Terminal(s):
                    lines.append(str(s))
                case _:
                    lines.append(f"fault ({self.reason})")
        return lines


@dataclass(frozen=True)
class ExplorationResult:
    """Where the probability mass of one configuration ends up.

    ``terminal + fault_mass + residual_mass == 1`` always.  When ``exact``
    is set the residual is exactly the divergence probability (zero after a
    complete bounded run).
    """

    terminal: Mapping[State, Fraction]
    fault_mass: Fraction
    residual_mass: Fraction
    exact: bool
    fault_witnesses: tuple[FaultWitness, ...] = ()
    layers: int = 0
    nodes: int = 0
    cap_exceeded: bool = False

    @property
    def terminal_mass(self) -> Fraction:
        return sum(self.terminal.values(), Fraction(0))

    @property
    def total_mass(self) -> Fraction:
        return self.terminal_mass + self.fault_mass + self.residual_mass

    @property
    def terminates(self) -> bool:
        return self.terminal_mass == 1

    def terminal_dist(self) -> Dist[State]:
        if not self.terminates:
            raise ValueError("the configuration does not terminate with probability 1")
        return Dist(self.terminal)


def _witness(start: Config, cfg: Config, parents: dict, reason: str) -> FaultWitness:
    path: list[Config] = [cfg]
    labels: list[SampleLabel | None] = []
    while parents.get(path[-1]) is not None:
        prev, label = parents[path[-1]]
        path.append(prev)
        labels.append(label)
    path.reverse()
    labels.reverse()
    return FaultWitness(tuple(path) + (Fault(reason),), tuple(labels) + (None,), reason)


def _freeze(d: dict) -> Mapping:
    return MappingProxyType(dict(sorted(d.items())))


def explore(c: Command, s: State, budget: int) -> ExplorationResult:
    """Breadth-first mass propagation for at most ``budget`` transition layers."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    start = Nonterminal(c, s)
    frontier: dict[Config, Fraction] = {start: Fraction(1)}
    parents: dict[Config, tuple[Config, SampleLabel | None] | None] = {start: None}
    terminal: dict[State, Fraction] = {}
    fault = Fraction(0)
    witnesses: list[FaultWitness] = []
    layers = 0
    while frontier and layers < budget:
        layers += 1
        nxt: dict[Config, Fraction] = {}
        for cfg, m in frontier.items():
            for br in step(cfg):
                mass = m * br.prob
                target = br.next
                if isinstance(target, Terminal):
                    terminal[target.state] = terminal.get(target.state, Fraction(0)) + mass
                elif isinstance(target, Fault):
                    fault += mass
                    if len(witnesses) < MAX_WITNESSES:
                        witnesses.append(_witness(start, cfg, parents, target.reason))
                else:
                    nxt[target] = nxt.get(target, Fraction(0)) + mass
                    parents.setdefault(target, (cfg, br.label))
        frontier = nxt
    residual = sum(frontier.values(), Fraction(0))
    return ExplorationResult(
        terminal=_freeze(terminal),
        fault_mass=fault,
        residual_mass=residual,
        exact=residual == 0,
        fault_witnesses=tuple(witnesses),
        layers=layers,
        nodes=len(parents),
    )


_FAULT_KEY = "fault"


def absorption_solve(
    c: Command, s: State, node_cap: int, fallback_budget: int | None = None
) -> ExplorationResult:
    """Exact absorption probabilities over the finite reachable graph.

    If more than ``node_cap`` nonterminal configurations are reachable the
    graph is treated as too large and the result of ``explore`` with
    ``fallback_budget`` layers (default ``node_cap``) is returned instead,
    flagged with ``cap_exceeded``.
    """
    start = Nonterminal(c, s)
    order: list[Nonterminal] = [start]
    parents: dict[Config, tuple[Config, SampleLabel | None] | None] = {start: None}
    out: dict[Config, dict[Config, Fraction]] = {}
    absorb: dict[Config, dict[object, Fraction]] = {}
    witnesses: list[FaultWitness] = []
    queue = deque([start])
    while queue:
        u = queue.popleft()
        edges: dict[Config, Fraction] = {}
        sinks: dict[object, Fraction] = {}
        for br in step(u):
            target = br.next
            if isinstance(target, Terminal):
                sinks[target.state] = sinks.get(target.state, Fraction(0)) + br.prob
            elif isinstance(target, Fault):
                sinks[_FAULT_KEY] = sinks.get(_FAULT_KEY, Fraction(0)) + br.prob
                if len(witnesses) < MAX_WITNESSES:
                    witnesses.append(_witness(start, u, parents, target.reason))
            else:
                edges[target] = edges.get(target, Fraction(0)) + br.prob
                if target not in parents:
                    parents[target] = (u, br.label)
                    order.append(target)
                    queue.append(target)
                    if len(order) > node_cap:
                        res = explore(c, s, node_cap if fallback_budget is None else fallback_budget)
                        return ExplorationResult(
                            res.terminal, res.fault_mass, res.residual_mass, res.exact,
                            res.fault_witnesses, res.layers, res.nodes, cap_exceeded=True,
                        )
        out[u] = edges
        absorb[u] = sinks

    # Nodes that cannot reach any absorbing node carry pure divergence.
    preds: dict[Config, set[Config]] = {u: set() for u in order}
    for u, edges in out.items():
        for v in edges:
            preds[v].add(u)
    alive = {u for u in order if absorb[u]}
    todo = list(alive)
    while todo:
        v = todo.pop()
        for u in preds[v]:
            if u not in alive:
                alive.add(u)
                todo.append(u)

    if start not in alive:
        return ExplorationResult(
            terminal=_freeze({}), fault_mass=Fraction(0), residual_mass=Fraction(1),
            exact=True, layers=0, nodes=len(order),
        )

    for u in alive:
        out[u] = {v: p for v, p in out[u].items() if v in alive}
    preds = {u: {p for p in preds[u] if p in alive} for u in alive}

    for k in reversed(order[1:]):
        if k not in alive:
            continue
        loop = out[k].pop(k, Fraction(0))
        preds[k].discard(k)
        if loop == 1:
            raise AssertionError("node that reaches absorption has a certain self-loop")
        f = 1 / (1 - loop)
        k_out = {v: p * f for v, p in out.pop(k).items()}
        k_abs = {t: p * f for t, p in absorb.pop(k).items()}
        for u in preds.pop(k):
            a = out[u].pop(k)
            row = out[u]
            for v, p in k_out.items():
                row[v] = row.get(v, Fraction(0)) + a * p
                preds[v].add(u)
            sinks = absorb[u]
            for t, p in k_abs.items():
                sinks[t] = sinks.get(t, Fraction(0)) + a * p
        for v in k_out:
            preds[v].discard(k)

    loop = out[start].pop(start, Fraction(0))
    if out[start]:
        raise AssertionError("elimination left edges on the start node")
    f = 1 / (1 - loop)
    result = {t: p * f for t, p in absorb[start].items() if p}
    fault = result.pop(_FAULT_KEY, Fraction(0))
    terminal = {t: p for t, p in result.items()}
    residual = 1 - fault - sum(terminal.values(), Fraction(0))
    return ExplorationResult(
        terminal=_freeze(terminal),
        fault_mass=fault,
        residual_mass=residual,
        exact=True,
        fault_witnesses=tuple(witnesses) if fault else (),
        nodes=len(order),
    )


# -- analysis modes -------------------------------------------------------------

@dataclass(frozen=True)
class Mode:
    """``bounded(N)`` explores N layers; ``absorb(N)`` solves graphs of up to N nodes."""

    kind: str
    limit: int
    fallback_budget: int | None = None

    def __post_init__(self):
        if self.kind not in ("bounded", "absorb"):
            raise ValueError(f"unknown analysis mode {self.kind!r}")
        if self.limit < 0:
            raise ValueError("mode limit must be non-negative")

    @classmethod
    def bounded(cls, budget: int) -> Mode:
        return cls("bounded", budget)

    @classmethod
    def absorb(cls, node_cap: int, fallback_budget: int | None = None) -> Mode:
        return cls("absorb", node_cap, fallback_budget)

    def __str__(self) -> str:
        return f"{self.kind}({self.limit})"


DEFAULT_MODE = Mode.absorb(10000)


@lru_cache(maxsize=1 << 16)
def analyze(c: Command, s: State, mode: Mode = DEFAULT_MODE) -> ExplorationResult:
    """Run the analysis selected by ``mode`` from a single configuration."""
    if mode.kind == "bounded":
        return explore(c, s, mode.limit)
    return absorption_solve(c, s, mode.limit, mode.fallback_budget)


# -- random configurations -------------------------------------------------------

class NotTerminatingError(RuntimeError):
    """The random configuration is not (provably) terminating and fault-free."""

    def __init__(self, results: tuple[ExplorationResult, ...], weights: tuple[Fraction, ...]):
        self.results = results
        self.weights = weights
        self.fault_mass = sum((w * r.fault_mass for w, r in zip(weights, results)), Fraction(0))
        self.residual_mass = sum((w * r.residual_mass for w, r in zip(weights, results)), Fraction(0))
        self.exact = all(r.exact for r in results)
        super().__init__(
            f"random configuration is not terminating: fault mass {self.fault_mass}, "
            f"residual mass {self.residual_mass}"
        )


@dataclass(frozen=True)
class RandomRun:
    """The terminal random state of a terminating random configuration.

    ``family`` is the new sample space: one point per pair of a source point
    and a terminal state reachable from it, weighted by the source weight
    times the probability of reaching that state.  ``q`` sends each new
    point to its source point.
    """

    source: RandomState
    family: SampleFamily
    q: tuple[int, ...]

    @property
    def final(self) -> RandomState:
        return RandomState((w, tau) for w, (_, tau) in self.family)

    def pull(self, rs: RandomState | None = None) -> RandomState:
        """``rs . q``; ``rs`` must live on the source sample space."""
        rs = self.source if rs is None else rs
        if rs.weights != self.source.weights:
            raise ValueError("random state is not on the source sample space")
        vals = rs.values
        return RandomState((w, vals[i]) for (w, _), i in zip(self.family, self.q))

    def is_morphism(self) -> bool:
        pushed = [Fraction(0)] * len(self.source)
        for (w, _), i in zip(self.family, self.q):
            pushed[i] += w
        return tuple(pushed) == self.source.weights


def _point_results(c: Command, rs: RandomState, mode: Mode) -> tuple[ExplorationResult, ...]:
    return tuple(analyze(c, s, mode) for s in rs.values)


def run_random(c: Command, rs: RandomState, mode: Mode = DEFAULT_MODE) -> RandomRun:
    """Build the terminal random state; raises :class:`NotTerminatingError`."""
    results = _point_results(c, rs, mode)
    if any(r.fault_mass or r.residual_mass for r in results):
        raise NotTerminatingError(results, rs.weights)
    points = []
    q = []
    for i, ((w, _), r) in enumerate(zip(rs, results)):
        for tau, p in r.terminal.items():
            points.append((w * p, (i, tau)))
            q.append(i)
    return RandomRun(rs, SampleFamily(points), tuple(q))


class Status(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Answer:
    status: Status
    point: int | None = None
    witness: FaultWitness | None = None
    residual: Fraction = Fraction(0)
    faulted: bool = False

    @property
    def yes(self) -> bool:
        return self.status is Status.YES


def is_fault_free(c: Command, rs: RandomState, mode: Mode = DEFAULT_MODE) -> Answer:
    results = _point_results(c, rs, mode)
    for i, r in enumerate(results):
        if r.fault_mass:
            witness = r.fault_witnesses[0] if r.fault_witnesses else None
            return Answer(Status.NO, point=i, witness=witness, faulted=True)
    hidden = sum((w * r.residual_mass for w, r in zip(rs.weights, results) if not r.exact), Fraction(0))
    if hidden:
        return Answer(Status.UNKNOWN, residual=hidden)
    return Answer(Status.YES)


def is_terminating(c: Command, rs: RandomState, mode: Mode = DEFAULT_MODE) -> Answer:
    results = _point_results(c, rs, mode)
    for i, r in enumerate(results):
        if r.fault_mass or (r.exact and r.residual_mass):
            witness = r.fault_witnesses[0] if r.fault_witnesses else None
            return Answer(Status.NO, point=i, witness=witness, residual=r.residual_mass,
                          faulted=bool(r.fault_mass))
    residual = sum((w * r.residual_mass for w, r in zip(rs.weights, results)), Fraction(0))
    if residual:
        return Answer(Status.UNKNOWN, residual=residual)
    return Answer(Status.YES)


# -- paths, masking, tracing ------------------------------------------------------

@dataclass(frozen=True)
class Path:
    """A transition path: ``configs[i] --labels[i]--> configs[i+1]``."""

    configs: tuple[Config, ...]
    labels: tuple[SampleLabel | None, ...]
    probs: tuple[Fraction, ...]

    @property
    def probability(self) -> Fraction:
        out = Fraction(1)
        for p in self.probs:
            out *= p
        return out

    @property
    def final(self) -> Config:
        return self.configs[-1]

    def is_valid(self) -> bool:
        """Every step is a transition of the semantics with the recorded label and probability."""
        for cur, label, prob, nxt in zip(self.configs, self.labels, self.probs, self.configs[1:]):
            if not isinstance(cur, Nonterminal):
                return False
            if not any(br.label == label and br.prob == prob and br.next == nxt for br in step(cur)):
                return False
        return True


def terminal_paths(c: Command, s: State, max_length: int) -> Iterator[Path]:
    """Every terminal path of at most ``max_length`` transitions, depth first."""
    stack = [((Nonterminal(c, s),), (), ())]
    while stack:
        configs, labels, probs = stack.pop()
        if len(labels) >= max_length:
            continue
        for br in reversed(step(configs[-1])):
            path = (configs + (br.next,), labels + (br.label,), probs + (br.prob,))
            if isinstance(br.next, Terminal):
                yield Path(*path)
            elif isinstance(br.next, Nonterminal):
                stack.append(path)


def mask_path(s: State, path: Path) -> Path:
    def masked(cfg: Config) -> Config:
        match cfg:
            case Nonterminal(cmd, st):
                return Nonterminal(cmd, mask(s, st))
            case Terminal(st):
                return Terminal(mask(s, st))
        return cfg

    return Path(tuple(masked(cfg) for cfg in path.configs), path.labels, path.probs)


def command_hash(c: Command) -> str:
    return hashlib.sha1(pretty(c).encode()).hexdigest()[:8]


def trace(c: Command, s: State, budget: int) -> Iterator[str]:
    """Transition dump in breadth-first layers: ``C-hash | state | label | prob``.

    Configurations are deduplicated within a layer, matching :func:`explore`.
    """
    frontier = [Nonterminal(c, s)]
    for _ in range(budget):
        if not frontier:
            return
        nxt: dict[Config, None] = {}
        for cfg in frontier:
            for br in step(cfg):
                label = "-" if br.label is None else str(br.label)
                yield f"{command_hash(cfg.command)} | {cfg.state} | {label} | {br.prob}"
                if isinstance(br.next, Nonterminal):
                    nxt.setdefault(br.next)
        frontier = list(nxt)
