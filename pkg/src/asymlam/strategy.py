"""Normalizing strategies for the pure calculi.

:class:`Unbiased` is the unbiased iteration of a surface reduction: it fires
surface redexes while there are any, and once the term is surface-normal it
may reduce inside any subterm, each subterm again favouring its own surface
redexes.  With head reduction this is a superset of leftmost-outermost
reduction for CbN; with weak, left or right reduction it normalizes CbV.

The parallel variant (:meth:`Unbiased.pd_step`) does one surface step if
there is one and otherwise recurses into every reducible child at once.
"""

import math
from dataclasses import dataclass, field

from asymlam.qars import (LEFTMOST, Difference, Mode, Policy, Report, Union,
                          StateBudgetExceeded, check_rd_diamond, iterate,
                          reachable, render)
from asymlam.reduction import (BETA_FULL, BETAV_FULL, HEAD_BETA, LEFT_BETAV,
                               RIGHT_BETAV, WEAK_BETAV, Ctx, Redex,
                               Reduction, Rule, step)
from asymlam.terms import ARG, BODY, FUN, App, Lam, Op, size

__all__ = [
    'Unbiased', 'unbiased', 'u_step', 'pd_step', 'Trace', 'run',
    'leftmost_outermost', 'check_rd_diamond', 'check_factorization',
    'factorizes', 'internal_of', 'Policy', 'Mode', 'LEFTMOST',
]

_SURFACES = {Ctx.WEAK: WEAK_BETAV, Ctx.LEFT: LEFT_BETAV,
             Ctx.RIGHT: RIGHT_BETAV}


class Unbiased(Reduction):
    """Unbiased iteration of the surface relation ``surface`` inside the full
    relation ``base``."""

    def __init__(self, base, surface, name=None):
        super().__init__(name or 'u-%s' % surface.name, base.pairs)
        self.base = base
        self.surface = surface

    def _walk(self, t, pos):
        if not self.surface.is_normal(t):
            for r in self.surface.redexes(t):
                yield Redex(pos + r.position, r.rule)
            return
        for sel, c in _subterms(t):
            if not self.base.is_normal(c):
                yield from self._walk(c, pos + (sel,))

    def redexes(self, t):
        return list(self._walk(t, ()))

    def first_redex(self, t):
        return next(self._walk(t, ()), None)

    def is_normal(self, t):
        # same normal forms as the full relation
        return self.base.is_normal(t)

    def pd_step(self, t):
        """One step of the deterministic parallel variant."""
        memo = {}

        def go(t):
            hit = memo.get(t)
            if hit is not None:
                return hit
            r = self.surface.first_redex(t)
            if r is not None:
                out = step(t, r).term
            elif self.base.is_normal(t):
                out = t
            elif isinstance(t, Lam):
                out = Lam(go(t.body))
            elif isinstance(t, App):
                out = App(go(t.fun), go(t.arg))
            else:
                out = Op(t.sym, [go(a) for a in t.args])
            memo[t] = out
            return out

        return go(t)

    parallel_step = pd_step


def _subterms(t):
    if isinstance(t, Lam):
        return ((BODY, t.body),)
    if isinstance(t, App):
        return ((FUN, t.fun), (ARG, t.arg))
    if isinstance(t, Op):
        return tuple(enumerate(t.args))
    return ()


def unbiased(rule, surface=None):
    """The unbiased strategy for ``Rule.BETA`` (head surface) or
    ``Rule.BETAV`` (weak surface unless ``surface`` says left/right)."""
    if rule is Rule.BETA:
        if surface not in (None, Ctx.HEAD):
            raise ValueError('CbN surface reduction is head reduction')
        return Unbiased(BETA_FULL, HEAD_BETA, 'u-beta')
    if rule is Rule.BETAV:
        surf = _SURFACES.get(surface or Ctx.WEAK)
        if surf is None:
            raise ValueError('CbV surface must be weak, left or right')
        return Unbiased(BETAV_FULL, surf, 'u-betav-%s' % surf.name)
    raise ValueError('unbiased iteration is defined for beta and beta-v')


def u_step(t, rule, policy=LEFTMOST):
    """The one-step successors of ``t`` allowed by ``policy`` (all of them
    for ``Mode.PARALLEL``)."""
    rel = unbiased(rule, policy.surface)
    if policy.mode is Mode.PARALLEL:
        return rel.successors(t)
    got = rel.pick(t, policy, policy.rng())
    return [] if got is None else [got[1]]


def pd_step(t, rule, surface=None):
    return unbiased(rule, surface).pd_step(t)


def leftmost_outermost(rule=Rule.BETA):
    return BETA_FULL if rule is Rule.BETA else BETAV_FULL


@dataclass
class Trace:
    """A finite reduction sequence; ``steps`` pairs each label (a redex, or
    ``'parallel'``) with the term it produced."""
    start: object
    steps: list = field(default_factory=list)
    terminated: bool = False
    fuel_exhausted: bool = False

    @property
    def terms(self):
        return [self.start] + [t for _, t in self.steps]

    @property
    def final(self):
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self):
        return len(self.steps)


def run(t, relation, policy=LEFTMOST, fuel=100):
    """Follow ``relation`` from ``t`` for at most ``fuel`` steps."""
    if fuel < 0:
        raise ValueError('fuel must be >= 0')
    labels, states, terminated = iterate(t, relation, policy, fuel)
    return Trace(t, list(zip(labels, states[1:])), terminated,
                 not terminated and len(labels) == fuel)


# ----------------------------------------------------------------------------
# Factorization

def _growth(states, base_size, measure):
    worst = 1
    for s in states:
        worst = max(worst, math.ceil(measure(s) / base_size))
    return worst - 1


def _measure(state):
    m = getattr(state, 'size', None)
    if m is not None:
        return m() if callable(m) else m
    return size(state)


def factorizes(start, target, essential, internal, bound, budget=100000):
    """Search for ``start ->e* s ~>i* target`` with both legs at most
    ``bound`` long.

    Returns ``True`` when found, ``False`` when both search spaces were
    exhausted without finding it (a refutation) and ``None`` otherwise.
    """
    ess, ess_done = reachable([start], essential, bound, budget)
    if target in ess:
        return True
    dist, int_done = reachable(list(ess), internal, bound, budget)
    if target in dist:
        return True
    return False if ess_done and int_done else None


def check_factorization(start, essential, internal, depth, big=None,
                        budget=100000, measure=_measure):
    """Every endpoint of a ``big``-sequence of length <= ``depth`` from
    ``start`` must be reachable as an essential run followed by an internal
    run.

    ``big`` defaults to the union of the two relations.  Each leg is
    searched up to ``2 * depth * (1 + g)`` steps, where ``g`` is the largest
    relative size growth seen among the explored states; failures within
    that bound count as refutations only if the search space was exhausted,
    otherwise they are reported as inconclusive.
    """
    big = big or Union(essential, internal)
    rep = Report('factorization', 1)
    try:
        ends, _ = reachable([start], big, depth, budget)
        g = _growth(ends, measure(start), measure)
        bound = 2 * depth * (1 + g)
        ess, ess_done = reachable([start], essential, bound, budget)
        fact, int_done = reachable(list(ess), internal, bound, budget)
    except StateBudgetExceeded as exc:
        rep.undecided(start, 'state budget %s exceeded' % exc)
        return rep
    rep.stats.update(endpoints=len(ends), bound=bound)
    for u in ends:
        if u in fact:
            continue
        if ess_done and int_done:
            rep.violation(start, 'no factorized sequence reaches %s'
                          % render(u))
        else:
            rep.undecided(start, 'no factorized sequence to %s within %d '
                          'steps' % (render(u), bound))
    return rep


def internal_of(big, essential):
    """The steps of ``big`` that ``essential`` does not make."""
    return Difference(big, essential)
