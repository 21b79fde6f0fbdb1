import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from asymlam import parse
from asymlam.generate import random_term
from asymlam.terms import OPLUS, TICK

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile('default', max_examples=150, deadline=None)
settings.load_profile('default')


def terms(max_size=10, ops=(), closed=False):
    """Hypothesis strategy: random terms from a drawn seed."""
    return st.integers(0, 2 ** 32).map(
        lambda s: random_term(random.Random(s), max_size, ops,
                              closed=closed))


pure_terms = terms()
prob_terms = terms(ops=(OPLUS,))
tick_terms = terms(ops=(TICK,), closed=True)


@pytest.fixture
def p():
    return parse


DELTA = r'(\x.x x)'
OMEGA_SRC = DELTA + ' ' + DELTA
I_SRC = r'(\x.x)'


def md(src):
    """``"1/2 \\x.x ; 1/4 y"`` -> MultiDist."""
    from fractions import Fraction
    from asymlam.prob import MultiDist
    out = []
    for part in src.split(';'):
        w, _, term = part.strip().partition(' ')
        out.append((Fraction(w), parse(term)))
    return MultiDist(out)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get('test_acceptance')
    if mod is not None and mod.RESULTS:
        terminalreporter.section('acceptance criteria')
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
