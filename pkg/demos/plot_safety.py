"""
Safety counterexamples
======================

A triple whose program reads an unbound variable fails by faulting.
Dropping the safety requirement turns the same triple into one that holds.
"""

from pslab import RandomState, State, check_partial, parse_triple

spec = parse_triple("{top} X := X mod 2 {[X = 0 || X = 1]}")
empty = RandomState([(1, State())])

v = check_partial(spec, empty)
print("safe:  ", v)
for k, val in v.witness.items():
    print("   ", k, val)

print("unsafe:", check_partial(spec, empty, safety=False))
