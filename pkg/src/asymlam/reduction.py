"""Root rules and their contextual closures.

A step of a calculus is a root rule fired at a position belonging to some
context class.  Five classes are supported::

    Full   every position, including operator arguments
    Weak   W ::= [] | W M | M W
    Left   L ::= [] | L M | V L   (argument once the function is a value)
    Right  R ::= [] | M R | R V   (function once the argument is a value)
    Head   H ::= [] | \\x.H | H M

None of Weak, Left, Right or Head enters an operator argument, so effects
nested under another operator are frozen until the outer one fires.

A :class:`Reduction` bundles several ``(rule, context)`` pairs, e.g. the
probabilistic CbV relation is beta-v anywhere plus choice in weak contexts.
"""

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from asymlam.qars import Mode, Relation
from asymlam.terms import (ARG, BODY, FUN, OPLUS, TICK, App, InvalidPosition,
                           Lam, Op, instantiate, is_value, replace_at,
                           subterm_at)

__all__ = [
    'Rule', 'Ctx', 'Redex', 'StepResult', 'StaleRedex', 'root_step',
    'is_root_redex', 'redexes', 'first_redex', 'has_redex', 'step',
    'is_normal', 'shape', 'shape_preserved', 'Reduction', 'position_key',
    'BETA_FULL', 'BETAV_FULL', 'HEAD_BETA', 'WEAK_BETAV', 'LEFT_BETAV',
    'RIGHT_BETAV',
]

HALF = Fraction(1, 2)
ONE = Fraction(1)


class Rule(enum.Enum):
    BETA = 'beta'
    BETAV = 'betav'
    OPLUS = 'oplus'
    TICK = 'tick'
    PRINT = 'print'

    def __repr__(self):
        return self.name


class Ctx(enum.Enum):
    FULL = 'full'
    WEAK = 'weak'
    LEFT = 'left'
    RIGHT = 'right'
    HEAD = 'head'

    def __repr__(self):
        return self.name


class StaleRedex(ValueError):
    """The addressed subterm is not a redex of the requested rule."""


@dataclass(frozen=True)
class Redex:
    position: tuple
    rule: Rule

    def sort_key(self):
        return position_key(self.position), _RULE_ORDER[self.rule]


_RULE_ORDER = {r: i for i, r in enumerate(Rule)}
_SEL = {FUN: 0, ARG: 1, BODY: 0}


def position_key(pos):
    """Pre-order (leftmost-outermost) sort key of a position."""
    return tuple(_SEL.get(s, s) for s in pos)


@dataclass(frozen=True)
class StepResult:
    """Outcome of firing one redex.

    ``branches`` is a tuple of ``(weight, term)`` pairs whose weights sum to
    one; deterministic rules give a single branch of weight 1.  ``effect`` is
    ``'tick'`` for a tick, the emitted character for a print, else ``None``.
    """
    branches: tuple
    effect: object = None

    @property
    def term(self):
        if len(self.branches) != 1:
            raise ValueError('probabilistic step has no single successor')
        return self.branches[0][1]

    @property
    def deterministic(self):
        return len(self.branches) == 1

    def map(self, f):
        return StepResult(tuple((w, f(t)) for w, t in self.branches),
                          self.effect)


# ----------------------------------------------------------------------------
# Root rules

def is_root_redex(t, rule):
    if rule is Rule.BETA:
        return isinstance(t, App) and isinstance(t.fun, Lam)
    if rule is Rule.BETAV:
        return (isinstance(t, App) and isinstance(t.fun, Lam)
                and is_value(t.arg))
    if not isinstance(t, Op):
        return False
    if rule is Rule.OPLUS:
        return t.sym == OPLUS
    if rule is Rule.TICK:
        return t.sym == TICK
    return t.sym.name.startswith('print[')


def root_step(t, rule):
    """Contract ``t`` at the root, or return ``None`` if it is no redex."""
    if not is_root_redex(t, rule):
        return None
    if rule in (Rule.BETA, Rule.BETAV):
        return StepResult(((ONE, instantiate(t.fun.body, t.arg)),))
    if rule is Rule.OPLUS:
        return StepResult(((HALF, t.args[0]), (HALF, t.args[1])))
    if rule is Rule.TICK:
        return StepResult(((ONE, t.args[0]),), 'tick')
    return StepResult(((ONE, t.args[0]),), t.sym.name[6])


# ----------------------------------------------------------------------------
# Context closure

def _children(t, ctx):
    """``(selector, child, child_ctx)`` for the children ``ctx`` enters."""
    if ctx is Ctx.FULL:
        if isinstance(t, Lam):
            return ((BODY, t.body, ctx),)
        if isinstance(t, App):
            return ((FUN, t.fun, ctx), (ARG, t.arg, ctx))
        if isinstance(t, Op):
            return tuple((i, a, ctx) for i, a in enumerate(t.args))
        return ()
    if ctx is Ctx.HEAD:
        if isinstance(t, Lam):
            return ((BODY, t.body, ctx),)
        if isinstance(t, App):
            return ((FUN, t.fun, ctx),)
        return ()
    if not isinstance(t, App):
        return ()
    if ctx is Ctx.WEAK:
        return ((FUN, t.fun, ctx), (ARG, t.arg, ctx))
    if ctx is Ctx.LEFT:
        out = ((FUN, t.fun, ctx),)
        return out + ((ARG, t.arg, ctx),) if is_value(t.fun) else out
    # Right
    out = ((FUN, t.fun, ctx),) if is_value(t.arg) else ()
    return out + ((ARG, t.arg, ctx),)


@lru_cache(maxsize=1 << 18)
def has_redex(t, rule, ctx):
    """Whether ``t`` has a ``rule``-redex at some ``ctx`` position."""
    if is_root_redex(t, rule):
        return True
    return any(has_redex(c, rule, cc) for _, c, cc in _children(t, ctx))


def _walk(t, rule, ctx, pos):
    # pre-order enumeration, pruning redex-free subtrees
    if is_root_redex(t, rule):
        yield Redex(pos, rule)
    for sel, c, cc in _children(t, ctx):
        if has_redex(c, rule, cc):
            yield from _walk(c, rule, cc, pos + (sel,))


def redexes(t, rule, ctx):
    """All ``rule``-redexes of ``t`` in ``ctx`` positions, leftmost-outermost
    first."""
    return list(_walk(t, rule, ctx, ()))


def first_redex(t, rule, ctx):
    return next(_walk(t, rule, ctx, ()), None)


def is_normal(t, rules, ctx):
    if isinstance(rules, Rule):
        rules = (rules,)
    return not any(has_redex(t, r, ctx) for r in rules)


def step(t, r):
    """Fire redex ``r`` of ``t`` in place."""
    try:
        sub = subterm_at(t, r.position)
    except InvalidPosition as e:
        raise StaleRedex(str(e)) from None
    res = root_step(sub, r.rule)
    if res is None:
        raise StaleRedex('no %s-redex at %r' % (r.rule.value, r.position))
    if not r.position:
        return res
    return res.map(lambda b: replace_at(t, r.position, b))


def shape(t):
    """Outermost constructor of ``t`` (with the symbol for operators)."""
    if isinstance(t, Op):
        return ('Op', t.sym)
    return type(t).__name__


_SURFACE = {Rule.BETA: Ctx.HEAD, Rule.BETAV: Ctx.WEAK}


def shape_preserved(t, r, surface=None):
    """Check that a non-surface step keeps the outermost constructor."""
    surface = surface or _SURFACE.get(r.rule, Ctx.WEAK)
    if r in redexes(t, r.rule, surface):
        raise ValueError('%r is a surface redex' % (r,))
    return all(shape(b) == shape(t) for _, b in step(t, r).branches)


# ----------------------------------------------------------------------------
# Bundled relations

class Reduction(Relation):
    """The union of some ``(rule, context)`` closures, as one relation on
    terms.  Labels are :class:`Redex` objects."""

    def __init__(self, name, pairs):
        self.name = name
        self.pairs = tuple(pairs)
        self.rules = tuple(dict.fromkeys(r for r, _ in self.pairs))

    def __repr__(self):
        return 'Reduction(%s)' % self.name

    def redexes(self, t):
        found = []
        for rule, ctx in self.pairs:
            found.extend(_walk(t, rule, ctx, ()))
        return sorted(set(found), key=Redex.sort_key)

    def first_redex(self, t):
        cands = [r for r in (first_redex(t, rule, ctx)
                             for rule, ctx in self.pairs) if r is not None]
        return min(cands, key=Redex.sort_key, default=None)

    def is_normal(self, t):
        return not any(has_redex(t, rule, ctx) for rule, ctx in self.pairs)

    def steps(self, t):
        """``(redex, StepResult)`` for every redex of ``t``."""
        return [(r, step(t, r)) for r in self.redexes(t)]

    def labelled(self, t):
        # only meaningful for deterministic rules; choice yields
        # distributions, see asymlam.prob
        return [(r, res.term) for r, res in self.steps(t)]

    def pick(self, t, policy, rng):
        if policy.mode is Mode.LEFTMOST:
            r = self.first_redex(t)
            return None if r is None else (r, step(t, r).term)
        return super().pick(t, policy, rng)

    def restrict(self, ctx, name=None):
        """The same rules, every one closed under ``ctx`` instead."""
        return Reduction(name or '%s/%s' % (self.name, ctx.value),
                         [(r, ctx) for r, _ in self.pairs])


BETA_FULL = Reduction('beta', [(Rule.BETA, Ctx.FULL)])
BETAV_FULL = Reduction('betav', [(Rule.BETAV, Ctx.FULL)])
HEAD_BETA = Reduction('head', [(Rule.BETA, Ctx.HEAD)])
WEAK_BETAV = Reduction('weak', [(Rule.BETAV, Ctx.WEAK)])
LEFT_BETAV = Reduction('left', [(Rule.BETAV, Ctx.LEFT)])
RIGHT_BETAV = Reduction('right', [(Rule.BETAV, Ctx.RIGHT)])
