"""
Evaluating a probabilistic term to its limit distribution
=========================================================

A term that flips a fair coin and either returns the identity or starts
over reaches the identity with probability 1, but never in finitely many
steps.  Full-lifted unbiased evaluation shows the mass accumulating.
"""

from asymlam import parse
from asymlam.prob import CBV, MultiDist, llfull_run, obs_pn
from asymlam.qars import LEFTMOST

# x |-> I (+) x x, applied to itself
half = r'(\x.(\y.y) (+) x x)'
start = MultiDist.point(parse(half + half))

trace = llfull_run(start, CBV, LEFTMOST, fuel=12)
for i, m in enumerate(trace.dists):
    print('%2d  pn=%-9s %s' % (i, obs_pn(m, CBV), m))

# the same run, longer: the mass on normal forms approaches 1
long = llfull_run(start, CBV, LEFTMOST, fuel=60)
print('after 60 steps:', float(obs_pn(long.final, CBV)))

# a term that diverges with probability 1/2 keeps half of its mass away
diverge = r'(\z.(\x.x x) (\x.x x))'
s = r'(\x.(%s (+) \y.y) (+) x x)' % diverge
trace = llfull_run(MultiDist.point(parse(s + ' ' + s)), CBV, LEFTMOST,
                   fuel=30)
print('mass on the identity after 30 steps:', trace.obs_N()[-1])
