"""
Assertions over random states
=============================

Assertions are three valued: true, false, or undefined when they read a
variable that some point leaves unbound.  Separating conjunction asks
for independent pieces.
"""

from pslab import parse_assertion, parse_random_state

rs = parse_random_state("1/4 {X:0, Y:0} + 1/4 {X:0, Y:1} + 1/4 {X:1, Y:0} + 1/4 {X:1, Y:1}")
corr = parse_random_state("1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}")
part = parse_random_state("1/2 {X:0} + 1/2 {X:1, Y:1}")

for text in (
    "X ~ bernoulli(1/2)",
    "det(X)",
    "X ~ bernoulli(1/2) * Y ~ bernoulli(1/2)",
    "cond(X) det(Y)",
    "[Y = 0] -> [X = 0]",
):
    a = parse_assertion(text)
    print(f"{text:42}", a.evaluate(rs).name, a.evaluate(corr).name, a.evaluate(part).name)
