"""
Relative tightness
==================

A postcondition can hold while saying nothing about how the final
state depends on the initial one.  Relative tightness asks for the
final state to be independent of the input once the postcondition's
footprint is fixed.
"""

from pslab import check_partial, check_relative_tightness, parse_random_state, parse_triple

spec = parse_triple("{top} X := X mod 2 {[X = 0 || X = 1]}")
rs = parse_random_state("1/2 {X:0} + 1/2 {X:1}")

print("partial correctness:", check_partial(spec, rs))
v = check_relative_tightness(spec, rs)
print("relative tightness: ", v)
for k, val in v.witness.items():
    print("   ", k, val)

###############################################################################
# Overwriting X with a fresh coin makes the output independent of the input

fresh = parse_triple("{top} X ~ bernoulli(1/2) {X ~ bernoulli(1/2)}")
print("fresh coin:", check_relative_tightness(fresh, rs))
