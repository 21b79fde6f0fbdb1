"""
Approximating Böhm trees breadth first
======================================

The parallel unbiased head strategy explores every argument of a head
normal form at once, so a diverging argument cannot hide the rest of the
tree.  Leftmost reduction gets stuck in the first diverging argument.
"""

from asymlam import parse
from asymlam.bohm import bt_approx, leftmost_approx, pnf_pretty

# an infinite spine z (z (z ...))
spine = parse(r'(\x.z (x x)) (\x.z (x x))')
for k, p in enumerate(bt_approx(spine, 5)):
    print(k, pnf_pretty(p))

# a diverging first argument and a normalizing second one
t = parse(r'z ((\x.x x) (\x.x x)) ((\x.x) z)')
print('parallel:', pnf_pretty(bt_approx(t, 4).top))
print('leftmost:', pnf_pretty(leftmost_approx(t, 4).top))
print('unicode: ', pnf_pretty(bt_approx(t, 4).top, unicode=True))
