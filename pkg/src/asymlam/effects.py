"""Effectful CbV calculi: a payoff counter incremented by ``tick`` and an
output buffer written by ``print[c]``.

States pair an effect record with a term.  The term part reduces by beta-v
(anywhere, or only in weak/left/right contexts), while effects fire only in
weak contexts, or left/right ones for the restricted relations.

Output buffers are stored newest character first, so printing ``c`` in
state ``<s : print[c](P)>`` gives ``<cs : P>``.
:attr:`OutputState.chronological` gives the order in which characters were
emitted.
"""

from dataclasses import dataclass

from asymlam.qars import NAT_INF, STRINGS, Mode, Observation, Relation
from asymlam.reduction import Ctx, Reduction, Rule, root_step, step
from asymlam.syntax import pretty
from asymlam.terms import TICK, App, Op, is_value, operators_in, size

__all__ = [
    'PayoffState', 'OutputState', 'EffectRelation', 'payoff_relation',
    'output_relation', 'payoff_step', 'output_step', 'payoff_pw_step',
    'ParallelWeak', 'OBS_PAYOFF', 'OBS_BUFFER', 'OBS_LENGTH',
]


@dataclass(frozen=True)
class PayoffState:
    counter: int
    term: object

    def __post_init__(self):
        extra = operators_in(self.term) - {TICK}
        if extra:
            raise ValueError('payoff terms only use tick, found %s'
                             % ', '.join(sorted(s.name for s in extra)))

    def size(self):
        return size(self.term)

    def __str__(self):
        return '<%d : %s>' % (self.counter, pretty(self.term))


@dataclass(frozen=True)
class OutputState:
    buffer: str
    term: object

    @property
    def chronological(self):
        return self.buffer[::-1]

    def size(self):
        return size(self.term) + len(self.buffer)

    def __str__(self):
        return '<%s : %s>' % (self.buffer or '""', pretty(self.term))


def _apply_effect(state, effect, term):
    if isinstance(state, PayoffState):
        return PayoffState(state.counter + (effect == 'tick'), term)
    return OutputState(state.buffer if effect is None else effect
                       + state.buffer, term)


class EffectRelation(Relation):
    """Beta-v closed under ``beta_ctx`` together with the effect rule
    closed under ``effect_ctx``."""

    def __init__(self, name, effect_rule, beta_ctx, effect_ctx):
        self.name = name
        self.term_rel = Reduction(name, [(Rule.BETAV, beta_ctx),
                                         (effect_rule, effect_ctx)])

    def labelled(self, state):
        out = []
        for r in self.term_rel.redexes(state.term):
            res = step(state.term, r)
            out.append((r, _apply_effect(state, res.effect, res.term)))
        return out

    def is_normal(self, state):
        return self.term_rel.is_normal(state.term)

    def pick(self, state, policy, rng):
        if policy.mode is Mode.LEFTMOST:
            r = self.term_rel.first_redex(state.term)
            if r is None:
                return None
            res = step(state.term, r)
            return r, _apply_effect(state, res.effect, res.term)
        return super().pick(state, policy, rng)


def _relation(kind, ctx):
    rule = Rule.TICK if kind == 'payoff' else Rule.PRINT
    if ctx is Ctx.FULL:
        return EffectRelation('%s-full' % kind, rule, Ctx.FULL, Ctx.WEAK)
    if ctx in (Ctx.WEAK, Ctx.LEFT, Ctx.RIGHT):
        return EffectRelation('%s-%s' % (kind, ctx.value), rule, ctx, ctx)
    raise ValueError('effect calculi use full, weak, left or right '
                     'reduction, not %s' % ctx.value)


def payoff_relation(ctx=Ctx.WEAK):
    return _relation('payoff', ctx)


def output_relation(ctx=Ctx.WEAK):
    return _relation('output', ctx)


def payoff_step(state, ctx=Ctx.WEAK):
    return payoff_relation(ctx).successors(state)


def output_step(state, ctx=Ctx.WEAK):
    return output_relation(ctx).successors(state)


# ----------------------------------------------------------------------------
# Parallel weak reduction

def _pw(t):
    # (ticks, reduct) for counter 0
    if is_value(t):
        return 0, t
    res = root_step(t, Rule.BETAV)
    if res is not None:
        return 0, res.term
    if isinstance(t, Op):
        if t.sym != TICK:
            raise ValueError('unexpected operator %s' % t.sym.name)
        return 1, t.args[0]
    # an application that is not a beta-v redex: both sides in parallel
    k1, f = _pw(t.fun)
    k2, a = _pw(t.arg)
    return k1 + k2, App(f, a)


def payoff_pw_step(state):
    """One step of deterministic parallel weak reduction."""
    k, t = _pw(state.term)
    return PayoffState(state.counter + k, t)


class ParallelWeak(Relation):
    """Parallel weak reduction as a (deterministic) relation; values are
    its fixed points."""
    name = 'payoff-pw'

    def labelled(self, state):
        return [('pw', payoff_pw_step(state))]

    def is_normal(self, state):
        return is_value(state.term)

    def pick(self, state, policy, rng):
        if self.is_normal(state):
            return None
        return 'pw', payoff_pw_step(state)


OBS_PAYOFF = Observation('payoff', lambda s: s.counter, NAT_INF)
OBS_BUFFER = Observation('buffer', lambda s: s.buffer, STRINGS)
OBS_LENGTH = Observation('length', lambda s: len(s.buffer), NAT_INF)
