"""
Effects along infinite reductions
=================================

A payoff counter grows with every ``tick``, and a buffer records the
characters written by ``print``.  Which values are reachable in the limit
depends on where reduction is allowed to happen.
"""

from asymlam import parse
from asymlam.effects import (OBS_BUFFER, OBS_PAYOFF, OutputState,
                             ParallelWeak, PayoffState, output_relation,
                             payoff_relation)
from asymlam.qars import LEFTMOST, iterate, limit_set_bruteforce
from asymlam.reduction import Ctx

# a silent loop next to a ticking loop
m = parse(r'(\x.x x) (\x.x x) ((\x.tick(x x)) (\x.tick(x x)))')
s0 = PayoffState(0, m)

for ctx in (Ctx.LEFT, Ctx.RIGHT):
    _, states, _ = iterate(s0, payoff_relation(ctx), LEFTMOST, 20)
    print(ctx.value, [s.counter for s in states])

# parallel weak reduction advances both loops together
_, states, _ = iterate(s0, ParallelWeak(), LEFTMOST, 20)
print('pw', [s.counter for s in states])

# weak reduction may choose: every counter up to the depth is a limit
lims = limit_set_bruteforce(s0, payoff_relation(), OBS_PAYOFF, 6)
print('weak limits to depth 6:', sorted(l.value for l in lims))

# two prints in an application fire in either order; buffers are stored
# newest first
out = OutputState('', parse(r'print[0](\x.x) print[1](\x.x)'))
lims = limit_set_bruteforce(out, output_relation(), OBS_BUFFER, 10)
print('buffers:', sorted(l.value for l in lims))
