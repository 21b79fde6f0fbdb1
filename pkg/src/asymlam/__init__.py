"""Reduction strategies, limits and observations for lambda-calculi with
effects: pure CbN/CbV, probabilistic choice, payoff ticks, output and Böhm
tree approximation."""

import sys

from asymlam.terms import (OPLUS, TICK, App, Idx, Lam, Op, OpSym, Term, Var,
                           alpha_eq, free_vars, is_value, print_op,
                           replace_at, size, subst, subterm_at)
from asymlam.syntax import (ArityError, Operators, ParseError,
                            UnknownOperatorError, parse, pretty)

# terms are trees walked recursively; the default limit is too tight for
# long application spines
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__version__ = '0.1.0'

__all__ = [
    'OPLUS', 'TICK', 'App', 'Idx', 'Lam', 'Op', 'OpSym', 'Term', 'Var',
    'alpha_eq', 'free_vars', 'is_value', 'print_op', 'replace_at', 'size',
    'subst', 'subterm_at', 'ArityError', 'Operators', 'ParseError',
    'UnknownOperatorError', 'parse', 'pretty',
]
