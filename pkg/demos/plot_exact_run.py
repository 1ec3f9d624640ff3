"""
Exact runs of a probabilistic loop
==================================

A loop that keeps flipping a fair coin until it lands 0 never has a
finite bound on its length, yet it terminates with probability one.
The absorption solver finds that out exactly, with rational masses.
"""

from pslab import Mode, State, analyze, parse_program, pretty, run_random
from pslab.state import parse_random_state, format_random_state

prog = parse_program("X := 1; while X = 1 do X ~ bernoulli(1/2)")
print(pretty(prog))

# bounded exploration leaves some mass unexplored
for n in (4, 8, 16):
    r = analyze(prog, State(), Mode.bounded(n))
    print(f"bounded({n}): terminal {r.terminal_mass}, residual {r.residual_mass}")

# absorption closes the loop exactly
r = analyze(prog, State(), Mode.absorb(1000))
print("absorb:", dict(r.terminal), "exact" if r.exact else "inexact")

###############################################################################
# Gambler's ruin from 1 with absorbing barriers at 0 and 3

ruin = parse_program(
    "while 0 < X && X < 3 do { B ~ bernoulli(1/2); if B = 1 then X := X + 1 else X := X - 1 }"
)
r = analyze(ruin, State({"X": 1}), Mode.absorb(1000))
for s, p in sorted(r.terminal.items()):
    print(s, p)

###############################################################################
# Running a whole random state: each point is run and the results are
# glued back into one sample space

rs = parse_random_state("1/2 {X:0} + 1/2 {X:1}")
run = run_random(parse_program("Y ~ bernoulli(1/2); X := X + Y"), rs)
print(format_random_state(run.final))
print("projection is measure preserving:", run.is_morphism())
