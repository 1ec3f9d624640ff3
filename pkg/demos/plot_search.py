"""
Searching for counterexamples
=============================

Enumerate small random states in a fixed order and stop at the first
one that satisfies the precondition but breaks the triple.
"""

from pslab import SearchSpace, apply_frame, parse_assertion, parse_triple, search_counterexample
from pslab.state import format_random_state

spec = apply_frame(
    parse_triple("{top} X := X mod 2 {[X = 0 || X = 1]}"),
    parse_assertion("[Y = 0 || Y = 1]"),
)
space = SearchSpace(("X", "Y"), (0, 1), denominator=2, max_points=2)
print("space size:", space.size())

res = search_counterexample(spec, space, safety=False)
print(res.summary())
if res.found:
    print(format_random_state(res.witness), res.verdict)

###############################################################################
# A triple that holds survives the whole space

ok = parse_triple("{top} X ~ bernoulli(1/2) {X ~ bernoulli(1/2)}")
print(search_counterexample(ok, SearchSpace(("X",), (0, 1), max_points=2)).summary())
