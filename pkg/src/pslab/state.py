"""Partial program states and random states.

A :class:`State` is a finite partial map from variable names to integers.
A :class:`RandomState` is a state-valued :class:`~pslab.prob.SampleFamily`.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Any

from .prob import SampleFamily

__all__ = [
    "LiteralError",
    "NotTotalError",
    "RandomState",
    "State",
    "format_random_state",
    "is_total",
    "mask",
    "parse_random_state",
    "parse_state",
    "project_int",
    "random_is_total",
    "random_leq",
    "random_restrict",
    "restrict",
    "state_leq",
    "update",
]

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class NotTotalError(ValueError):
    pass


class LiteralError(ValueError):
    """Malformed state or random-state literal."""


class State(Mapping[str, int]):
    """Immutable partial state; keys are kept sorted so equal states hash equal."""

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, bindings: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        pairs = dict(bindings.items() if isinstance(bindings, Mapping) else bindings)
        for name, value in pairs.items():
            if not isinstance(name, str) or not IDENT.match(name):
                raise ValueError(f"invalid variable name {name!r}")
            if not isinstance(value, int) or isinstance(value, bool):
                raise TypeError(f"value of {name} must be an int, got {value!r}")
        self._items = tuple(sorted(pairs.items()))
        self._map = dict(self._items)
        self._hash = hash(self._items)

    def __getitem__(self, name: str) -> int:
        return self._map[name]

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, name: object) -> bool:
        return name in self._map

    def __eq__(self, other: object) -> bool:
        if isinstance(other, State):
            return self._items == other._items
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: State) -> bool:
        return self._items < other._items

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self._map)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}:{v}" for k, v in self._items) + "}"

    def __repr__(self) -> str:
        return f"State({self})"


def state_leq(s1: State, s2: State) -> bool:
    return all(k in s2 and s2[k] == v for k, v in s1.items())


def restrict(s: State, variables: Iterable[str]) -> State:
    variables = set(variables)
    return State((k, v) for k, v in s.items() if k in variables)


def is_total(s: State, variables: Iterable[str]) -> bool:
    return all(x in s for x in variables)


def update(s: State, name: str, value: int) -> State:
    d = dict(s)
    d[name] = value
    return State(d)


def mask(s: State, over: State) -> State:
    """``over`` where it is defined, ``s`` elsewhere."""
    d = dict(s)
    d.update(over)
    return State(d)


class RandomState(SampleFamily[State]):
    """A state-valued random variable over a finite sample space."""

    __slots__ = ()

    def __init__(self, points: Iterable[tuple[Any, State]]):
        points = list(points)
        for _, s in points:
            if not isinstance(s, State):
                raise TypeError(f"random state points must be States, got {s!r}")
        super().__init__(points)

    @classmethod
    def point(cls, s: State | Mapping[str, int]) -> RandomState:
        return cls([(1, s if isinstance(s, State) else State(s))])

    def _rebuild(self, points):
        return RandomState(points)

    def __str__(self) -> str:
        return format_random_state(self)


def random_restrict(rs: RandomState, variables: Iterable[str]) -> RandomState:
    variables = frozenset(variables)
    return RandomState((w, restrict(s, variables)) for w, s in rs)


def random_is_total(rs: RandomState, variables: Iterable[str]) -> bool:
    variables = tuple(variables)
    return all(is_total(s, variables) for _, s in rs)


def random_leq(r1: RandomState, r2: RandomState) -> bool:
    """Pointwise order; only defined for two random states on one sample space."""
    if r1.weights != r2.weights:
        raise ValueError("random states are on different sample spaces")
    return all(state_leq(a, b) for a, b in zip(r1.values, r2.values))


def project_int(rs: RandomState, name: str) -> SampleFamily[int]:
    if not random_is_total(rs, [name]):
        raise NotTotalError(f"random state is not {{{name}}}-total")
    return rs.map(lambda s: s[name])


# -- literals ---------------------------------------------------------------

_STATE_RE = re.compile(r"\{([^{}]*)\}")
_BINDING_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([+-]?\d+)\s*\Z")
_WEIGHT_RE = re.compile(r"\s*(\d+)\s*(?:/\s*(\d+)\s*)?\Z")


def parse_state(text: str) -> State:
    """Parse ``{X:0, Y:1}``."""
    m = _STATE_RE.fullmatch(text.strip())
    if not m:
        raise LiteralError(f"expected a state literal like {{X:0, Y:1}}, got {text!r}")
    body = m.group(1).strip()
    bindings: dict[str, int] = {}
    if body:
        for part in body.split(","):
            b = _BINDING_RE.match(part)
            if not b:
                raise LiteralError(f"bad binding {part.strip()!r} in {text!r}")
            if b.group(1) in bindings:
                raise LiteralError(f"variable {b.group(1)} bound twice in {text!r}")
            bindings[b.group(1)] = int(b.group(2))
    return State(bindings)


def parse_random_state(text: str) -> RandomState:
    """Parse ``1/2 {X:0} + 1/2 {X:1}``; a lone state without weight means weight 1."""
    points: list[tuple[Fraction, State]] = []
    pos = 0
    text = text.strip()
    if not text:
        raise LiteralError("empty random-state literal")
    while True:
        m = _STATE_RE.search(text, pos)
        if not m:
            raise LiteralError(f"expected a state literal at offset {pos} in {text!r}")
        prefix = text[pos:m.start()]
        if prefix.strip():
            w = _WEIGHT_RE.match(prefix)
            if not w:
                raise LiteralError(f"bad weight {prefix.strip()!r} in {text!r}")
            den = int(w.group(2)) if w.group(2) else 1
            if den == 0:
                raise LiteralError(f"zero denominator in {text!r}")
            weight = Fraction(int(w.group(1)), den)
        else:
            weight = Fraction(1)
        points.append((weight, parse_state(m.group(0))))
        pos = m.end()
        rest = text[pos:].lstrip()
        if not rest:
            break
        if not rest.startswith("+"):
            raise LiteralError(f"expected '+' between terms in {text!r}")
        pos = len(text) - len(rest) + 1
    try:
        return RandomState(points)
    except ValueError as exc:
        raise LiteralError(str(exc)) from None


def format_random_state(rs: SampleFamily[State]) -> str:
    return " + ".join(f"{w} {s}" for w, s in rs)
