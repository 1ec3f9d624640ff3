"""
The frame rule and how it breaks
================================

Framing a valid triple with an assertion over variables the program
does not write gives a valid triple.  The side condition on written
variables is enforced, and a triple that only holds thanks to a
faulting run loses soundness once framed.
"""

from pslab import apply_frame, check_partial, parse_assertion, parse_random_state, parse_triple
from pslab.speccheck import FrameError

coin = parse_triple("{top} X ~ bernoulli(1/2) {X ~ bernoulli(1/2)}")
theta = parse_assertion("[Y = 0 || Y = 1]")
framed = apply_frame(coin, theta)
print(framed)
rs = parse_random_state("1/2 {Y:0} + 1/2 {Y:1}")
print(check_partial(framed, rs))

# framing over a written variable is rejected
try:
    apply_frame(coin, parse_assertion("[X = 0]"))
except FrameError as exc:
    print("rejected:", exc)

###############################################################################
# Correlated inputs: the framed postcondition needs X and Y independent

parity = parse_triple("{top} X := X mod 2 {[X = 0 || X = 1]}")
framed = apply_frame(parity, theta)
rs = parse_random_state("1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}")
v = check_partial(framed, rs)
print(v)
