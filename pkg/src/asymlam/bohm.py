"""Böhm-tree approximation.

A partial normal form is either ``OMEGA`` or ``\\x1..xn. h A1 .. Ak`` with a
variable ``h`` and partial normal forms ``Ai``.  ``pnf_of`` keeps the stable
part of a term, its head normal form structure, and cuts everything else to
``OMEGA``.  Iterating the parallel unbiased head strategy and observing with
``pnf_of`` yields an increasing chain whose limit is the Böhm tree.
"""

from dataclasses import dataclass

from asymlam.qars import LEFTMOST, NO_LUB, Cpo, Observation
from asymlam.reduction import BETA_FULL, Rule
from asymlam.strategy import unbiased
from asymlam.syntax import binder_names
from asymlam.terms import App, Idx, Lam, Var, free_vars, is_pure

__all__ = ['Omega', 'OMEGA', 'Head', 'pnf_of', 'pnf_leq', 'pnf_join',
           'pnf_pretty', 'pnf_tree', 'PNF', 'OBS_OMEGA', 'BTApprox',
           'bt_approx', 'leftmost_approx', 'ImpureTermError']


class Omega:
    """The undefined approximant."""
    __slots__ = ()
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = object.__new__(cls)
        return cls._inst

    def __repr__(self):
        return 'OMEGA'

    def __str__(self):
        return '_|_'

    def __reduce__(self):
        return (Omega, ())


OMEGA = Omega()


@dataclass(frozen=True)
class Head:
    """``binders`` abstractions over head variable ``head`` (a free
    :class:`Var` or a de Bruijn :class:`Idx`) applied to ``args``."""
    binders: int
    head: object
    args: tuple

    def __str__(self):
        return pnf_pretty(self)


class ImpureTermError(ValueError):
    """Böhm trees are defined for pure terms only."""


def pnf_of(t):
    """The partial normal form observed on ``t``."""
    n = 0
    while isinstance(t, Lam):
        n += 1
        t = t.body
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    if not isinstance(t, (Var, Idx)):
        return OMEGA
    return Head(n, t, tuple(pnf_of(a) for a in reversed(args)))


def pnf_leq(a, b):
    if a is OMEGA:
        return True
    if b is OMEGA:
        return False
    return (a.binders == b.binders and a.head is b.head
            and len(a.args) == len(b.args)
            and all(pnf_leq(x, y) for x, y in zip(a.args, b.args)))


def pnf_join(a, b):
    if a is OMEGA:
        return b
    if b is OMEGA:
        return a
    if (a.binders, a.head, len(a.args)) != (b.binders, b.head, len(b.args)):
        return NO_LUB
    args = []
    for x, y in zip(a.args, b.args):
        j = pnf_join(x, y)
        if j is NO_LUB:
            return NO_LUB
        args.append(j)
    return Head(a.binders, a.head, tuple(args))


def _complete(p):
    return p is not OMEGA and all(_complete(a) for a in p.args)


PNF = Cpo('partial-normal-forms', pnf_leq, OMEGA, _complete, pnf_join)
OBS_OMEGA = Observation('omega', pnf_of, PNF)


def _free(p):
    if p is OMEGA:
        return frozenset()
    out = free_vars(p.head)
    for a in p.args:
        out |= _free(a)
    return out


def _walk(p, env, supply, on_head):
    # shared by the printer and the tree encoder: names binders the way
    # the term printer does
    names = []
    for i in range(p.binders):
        depth = len(env) + i
        while len(supply[1]) <= depth:
            supply[1].append(next(supply[0]))
        names.append(supply[1][depth])
    env = env + names
    if isinstance(p.head, Var):
        head = p.head.name
    else:
        head = env[-1 - p.head.index]
    return on_head(names, head, env)


def _supply(p):
    return [binder_names(_free(p)), []]


def pnf_pretty(p, unicode=False):
    """Concrete syntax, with ``_|_`` (or ``Ω``) for the undefined part."""
    bottom = 'Ω' if unicode else '_|_'
    lam = 'λ' if unicode else '\\'
    supply = _supply(p)

    def go(p, env, wrap):
        if p is OMEGA:
            return bottom

        def show(names, head, env):
            parts = [head] + [go(a, env, True) for a in p.args]
            s = ' '.join(parts)
            if names:
                s = '%s%s.%s' % (lam, ' '.join(names), s)
            needs = wrap and (names or p.args)
            return '(%s)' % s if needs else s

        return _walk(p, env, supply, show)

    return go(p, [], False)


def pnf_tree(p):
    """JSON-ready encoding: ``{"omega": true}`` or
    ``{"binders": [...], "head": name, "args": [...]}``."""
    supply = _supply(p)

    def go(p, env):
        if p is OMEGA:
            return {'omega': True}
        return _walk(p, env, supply, lambda names, head, env: {
            'binders': names, 'head': head,
            'args': [go(a, env) for a in p.args]})

    return go(p, [])


@dataclass
class BTApprox:
    """The approximants observed along a reduction, lowest first."""
    approximants: list
    depth: int

    @property
    def top(self):
        return self.approximants[-1]

    def __iter__(self):
        return iter(self.approximants)


def _check_pure(t):
    if not is_pure(t):
        raise ImpureTermError('Böhm trees need a term without operators')


def _chain(t, advance, depth):
    _check_pure(t)
    chain = [pnf_of(t)]
    for _ in range(depth):
        t = advance(t)
        p = pnf_of(t)
        if not pnf_leq(chain[-1], p):
            raise AssertionError('approximants decreased: %s then %s'
                                 % (pnf_pretty(chain[-1]), pnf_pretty(p)))
        chain.append(p)
    return BTApprox(chain, depth)


_UB = unbiased(Rule.BETA)


def bt_approx(t, depth):
    """Approximants along ``depth`` steps of parallel unbiased head
    reduction."""
    return _chain(t, _UB.pd_step, depth)


def _leftmost(t):
    got = BETA_FULL.pick(t, LEFTMOST, None)
    return t if got is None else got[1]


def leftmost_approx(t, depth):
    """Approximants along ``depth`` leftmost-outermost steps."""
    return _chain(t, _leftmost, depth)
