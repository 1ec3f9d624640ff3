"""Exact finite discrete probability over rationals.

Two value types live here:

* :class:`Dist` -- a distribution stored by its support (value -> weight).
* :class:`SampleFamily` -- a finite sample space together with a random
  variable on it, stored as an ordered list of ``(weight, value)`` points.
  Point ``i`` *is* the sample point; equal values at different points are
  kept apart.

All weights are :class:`fractions.Fraction`; there is no floating point
anywhere in this module.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Any, Generic, TypeVar

__all__ = [
    "Dist",
    "NullEventError",
    "SampleFamily",
    "as_fraction",
    "cond_independent",
    "condition",
    "distribution_of",
    "independent",
    "pushforward",
    "refine",
    "sorted_values",
]

A = TypeVar("A", bound=Hashable)
B = TypeVar("B", bound=Hashable)


class NullEventError(ValueError):
    """Raised when conditioning on an event of probability zero."""


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, float):
        raise TypeError("probabilities must be exact; got a float")
    return Fraction(value)


def sorted_values(values: Iterable[Any]) -> list[Any]:
    """Sort for display; falls back to ``repr`` order for mixed types."""
    values = list(values)
    try:
        return sorted(values)
    except TypeError:
        return sorted(values, key=repr)


class Dist(Mapping[A, Fraction]):
    """Finite discrete distribution with strictly positive stored weights.

    Zero weights passed to the constructor are dropped; duplicate keys are
    impossible since the input is a mapping.  The weights must sum to 1.
    """

    __slots__ = ("_data", "_hash")

    def __init__(self, weights: Mapping[A, Any] | Iterable[tuple[A, Any]]):
        items = weights.items() if isinstance(weights, Mapping) else weights
        data: dict[A, Fraction] = {}
        for value, w in items:
            w = as_fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} for {value!r}")
            if w:
                data[value] = data.get(value, Fraction(0)) + w
        if sum(data.values(), Fraction(0)) != 1:
            raise ValueError(f"weights sum to {sum(data.values(), Fraction(0))}, not 1")
        self._data = data
        self._hash: int | None = None

    @classmethod
    def point(cls, value: A) -> Dist[A]:
        return cls({value: 1})

    @classmethod
    def uniform(cls, values: Iterable[A]) -> Dist[A]:
        values = list(dict.fromkeys(values))
        if not values:
            raise ValueError("uniform distribution over an empty set")
        w = Fraction(1, len(values))
        return cls({v: w for v in values})

    def __getitem__(self, value: A) -> Fraction:
        return self._data[value]

    def __iter__(self) -> Iterator[A]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dist):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def prob(self, value: A) -> Fraction:
        """Weight of ``value``; zero outside the support."""
        return self._data.get(value, Fraction(0))

    @property
    def support(self) -> frozenset[A]:
        return frozenset(self._data)

    def __repr__(self) -> str:
        body = ", ".join(f"{v!r}: {self._data[v]}" for v in sorted_values(self._data))
        return f"Dist({{{body}}})"


class SampleFamily(Generic[A]):
    """A finite sample space ``{0..n-1}`` with weights and a value per point."""

    __slots__ = ("_points",)

    def __init__(self, points: Iterable[tuple[Any, A]]):
        pts = tuple((as_fraction(w), v) for w, v in points)
        if not pts:
            raise ValueError("a sample family needs at least one point")
        for w, _ in pts:
            if w <= 0:
                raise ValueError(f"sample point weights must be positive, got {w}")
        total = sum((w for w, _ in pts), Fraction(0))
        if total != 1:
            raise ValueError(f"sample point weights sum to {total}, not 1")
        self._points = pts

    @classmethod
    def from_values(cls, values: Iterable[A]) -> SampleFamily[A]:
        """Equally weighted family, one point per value."""
        values = list(values)
        return cls((Fraction(1, len(values)), v) for v in values)

    @property
    def points(self) -> tuple[tuple[Fraction, A], ...]:
        return self._points

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for w, _ in self._points)

    @property
    def values(self) -> tuple[A, ...]:
        return tuple(v for _, v in self._points)

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[tuple[Fraction, A]]:
        return iter(self._points)

    def __getitem__(self, index: int) -> tuple[Fraction, A]:
        return self._points[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleFamily):
            return NotImplemented
        return self._points == other._points

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        body = ", ".join(f"({w}, {v!r})" for w, v in self._points)
        return f"{type(self).__name__}([{body}])"

    def _rebuild(self, points: Iterable[tuple[Fraction, Any]]) -> SampleFamily:
        # Subclasses constrain their values; derived variables fall back to the base class.
        return SampleFamily(points)

    def map(self, f: Callable[[A], B]) -> SampleFamily[B]:
        """The derived random variable ``f . S`` on the same sample space."""
        return SampleFamily((w, f(v)) for w, v in self._points)

    def pair(self, f: Callable[[A], Any], g: Callable[[A], Any]) -> SampleFamily:
        return SampleFamily((w, (f(v), g(v))) for w, v in self._points)

    def distribution(self) -> Dist[A]:
        return distribution_of(self)


def pushforward(d: Mapping[A, Any], f: Callable[[A], B]) -> Dist[B]:
    out: dict[B, Fraction] = {}
    for a, w in d.items():
        b = f(a)
        out[b] = out.get(b, Fraction(0)) + w
    return Dist(out)


def distribution_of(s: SampleFamily[A]) -> Dist[A]:
    out: dict[A, Fraction] = {}
    for w, v in s:
        out[v] = out.get(v, Fraction(0)) + w
    return Dist(out)


def condition(s: SampleFamily[A], obs: Callable[[A], Any], b: Any) -> SampleFamily[A]:
    """Restrict ``s`` to the points where ``obs`` equals ``b`` and renormalize."""
    kept = [(w, v) for w, v in s if obs(v) == b]
    mass = sum((w for w, _ in kept), Fraction(0))
    if not mass:
        raise NullEventError(f"cannot condition on {b!r}: the event has probability 0")
    return s._rebuild((w / mass, v) for w, v in kept)


def _identity(x: Any) -> Any:
    return x


def independent(
    s: SampleFamily[A],
    f: Callable[[A], Any] = _identity,
    g: Callable[[A], Any] = _identity,
) -> bool:
    """Exact test of ``f . S`` independent of ``g . S``.

    Every cell of the cross product of the two marginal supports is checked,
    so a missing joint cell counts as weight 0.
    """
    joint: dict[tuple[Any, Any], Fraction] = {}
    left: dict[Any, Fraction] = {}
    right: dict[Any, Fraction] = {}
    for w, v in s:
        a, b = f(v), g(v)
        joint[a, b] = joint.get((a, b), Fraction(0)) + w
        left[a] = left.get(a, Fraction(0)) + w
        right[b] = right.get(b, Fraction(0)) + w
    for a, pa in left.items():
        for b, pb in right.items():
            if joint.get((a, b), Fraction(0)) != pa * pb:
                return False
    return True


def cond_independent(
    s: SampleFamily[A],
    f: Callable[[A], Any],
    g: Callable[[A], Any],
    h: Callable[[A], Any],
) -> bool:
    """``f . S`` independent of ``g . S`` given ``h . S``, cell by cell."""
    for c in distribution_of(s.map(h)):
        if not independent(condition(s, h, c), f, g):
            return False
    return True


def refine(s: SampleFamily[A], split: Callable[[int], int]) -> SampleFamily[A]:
    """Split point ``i`` into ``split(i)`` equal copies.

    The map sending each new point back to its origin is a morphism of
    sample spaces; the distribution of the family is unchanged.
    """
    points: list[tuple[Fraction, A]] = []
    for i, (w, v) in enumerate(s):
        k = split(i)
        if k < 1:
            raise ValueError(f"split count must be positive, got {k} for point {i}")
        points.extend([(w / k, v)] * k)
    return s._rebuild(points)
