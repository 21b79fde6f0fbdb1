"""Quantitative rewriting: observations into omega-cpos, their chains and
limits, and executable versions of the proof obligations used to show that a
strategy is asymptotically normalizing.

Everything here is generic in the kind of state.  A *relation* is any object
with ``labelled(state) -> [(label, state')]`` in canonical order (leftmost
first) and ``is_normal(state)``; :class:`Relation` supplies the rest.
"""

import enum
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from asymlam.terms import is_value

__all__ = [
    'Mode', 'Policy', 'LEFTMOST', 'RIGHTMOST', 'PARALLEL', 'seeded',
    'Relation', 'FunctionRelation', 'Union', 'Difference', 'iterate',
    'reachable',
    'Cpo', 'NO_LUB', 'TWO_POINT', 'UNIT_INTERVAL', 'NAT_INF', 'INF', 'FLAT',
    'STRINGS',
    'Observation', 'obs_normal', 'obs_value', 'obs_nf', 'MonotonicityError',
    'ObsChain', 'LimitApprox', 'EXACT', 'LOWER_BOUND', 'observe_chain',
    'limit_set_bruteforce', 'StateBudgetExceeded', 'denotation',
    'all_obs_chains', 'Report', 'check_neutrality', 'check_obs_diamond',
    'check_rd_diamond', 'check_asymptotic_completeness',
    'check_monotonicity', 'render', 'rational',
]


def rational(q):
    """``"p/q"`` rendering of an exact rational."""
    q = Fraction(q)
    return '%d/%d' % (q.numerator, q.denominator)


def render(state):
    return str(state)


# ----------------------------------------------------------------------------
# Policies

class Mode(enum.Enum):
    LEFTMOST = 'leftmost'
    RIGHTMOST = 'rightmost'
    RANDOM = 'random'
    PARALLEL = 'parallel'


@dataclass(frozen=True)
class Policy:
    """How a run resolves the choice among successors.

    ``surface`` only matters for the unbiased strategies of CbV, where it
    picks weak, left or right reduction (``None`` keeps the default).
    """
    mode: Mode = Mode.LEFTMOST
    seed: int | None = None
    surface: object = None

    def rng(self):
        return random.Random(self.seed)


LEFTMOST = Policy(Mode.LEFTMOST)
RIGHTMOST = Policy(Mode.RIGHTMOST)
PARALLEL = Policy(Mode.PARALLEL)


def seeded(seed, surface=None):
    return Policy(Mode.RANDOM, seed, surface)


# ----------------------------------------------------------------------------
# Relations

class Relation:
    """Base class: subclasses define ``labelled`` (and maybe faster
    ``is_normal`` / ``pick`` / ``parallel_step``)."""

    name = 'relation'

    def labelled(self, state):
        raise NotImplementedError

    def successors(self, state):
        return [s for _, s in self.labelled(state)]

    def is_normal(self, state):
        return not self.labelled(state)

    def pick(self, state, policy, rng):
        """One ``(label, successor)`` chosen by ``policy``; ``None`` when
        ``state`` is normal."""
        if policy.mode is Mode.PARALLEL:
            par = getattr(self, 'parallel_step', None)
            if par is None:
                raise ValueError('%s has no parallel variant' % self.name)
            if self.is_normal(state):
                return None
            return 'parallel', par(state)
        succ = self.labelled(state)
        if not succ:
            return None
        if policy.mode is Mode.LEFTMOST:
            return succ[0]
        if policy.mode is Mode.RIGHTMOST:
            return succ[-1]
        return succ[rng.randrange(len(succ))]

    def __repr__(self):
        return '<%s %s>' % (type(self).__name__, self.name)


class FunctionRelation(Relation):
    """A relation given by a successor function (labels are indices)."""

    def __init__(self, name, successors, is_normal=None):
        self.name = name
        self._succ = successors
        self._normal = is_normal

    def labelled(self, state):
        return list(enumerate(self._succ(state)))

    def is_normal(self, state):
        if self._normal is not None:
            return self._normal(state)
        return not self._succ(state)


def _distinct(states):
    seen = {}
    for s in states:
        seen.setdefault(s, None)
    return list(seen)


class Union(Relation):

    def __init__(self, *parts, name=None):
        self.parts = parts
        self.name = name or ' | '.join(p.name for p in parts)

    def labelled(self, state):
        out = []
        for i, p in enumerate(self.parts):
            out.extend(((i, lab), s) for lab, s in p.labelled(state))
        return out

    def is_normal(self, state):
        return all(p.is_normal(state) for p in self.parts)


class Difference(Relation):
    """Pairs related by ``big`` but not by ``small``: the internal steps
    left over once the essential ones are removed."""

    def __init__(self, big, small, name=None):
        self.big = big
        self.small = small
        self.name = name or '%s \\ %s' % (big.name, small.name)

    def labelled(self, state):
        ess = set(self.small.successors(state))
        return [(lab, s) for lab, s in self.big.labelled(state)
                if s not in ess]


def iterate(state, relation, policy=LEFTMOST, fuel=100):
    """``(labels, states, terminated)`` of the policy-resolved sequence."""
    rng = policy.rng()
    states = [state]
    labels = []
    for _ in range(fuel):
        got = relation.pick(state, policy, rng)
        if got is None:
            return labels, states, True
        label, state = got
        labels.append(label)
        states.append(state)
    return labels, states, relation.is_normal(state)


def reachable(start, relation, depth, budget=None):
    """States reachable in at most ``depth`` steps, with their distance.

    Returns ``(dist, exhausted)`` where ``exhausted`` says the whole
    reachable space was explored before hitting the depth bound.
    """
    dist = {s: 0 for s in start}
    frontier = list(dist)
    for d in range(1, depth + 1):
        nxt = []
        for s in frontier:
            for t in relation.successors(s):
                if t not in dist:
                    dist[t] = d
                    nxt.append(t)
                    if budget is not None and len(dist) > budget:
                        raise StateBudgetExceeded(budget)
        frontier = nxt
        if not frontier:
            return dist, True
    return dist, not frontier


# ----------------------------------------------------------------------------
# Cpos

class _Inf:
    """The infinite element of the naturals-with-infinity."""
    __slots__ = ()

    def __repr__(self):
        return 'INF'

    def __str__(self):
        return 'inf'

    def __reduce__(self):
        return 'INF'


INF = _Inf()
NO_LUB = object()


@dataclass(frozen=True)
class Cpo:
    """An omega-cpo, given by its order, bottom and maximal elements.

    ``join`` gives the least upper bound of two elements, or ``NO_LUB`` when
    they have no upper bound.
    """
    name: str
    leq: object
    bottom: object
    is_maximal: object
    join: object = None

    def eq(self, a, b):
        return self.leq(a, b) and self.leq(b, a)

    def lub_chain(self, chain):
        # a finite prefix of a non-decreasing chain has its last element
        # as lub
        return chain[-1] if chain else self.bottom

    def lub(self, elems):
        """Join of finitely many elements; ``NO_LUB`` if there is none."""
        out = self.bottom
        for e in elems:
            out = self.join(out, e) if self.join else NO_LUB
            if out is NO_LUB:
                break
        return out


def _max_join(a, b):
    return b if a <= b else a


TWO_POINT = Cpo('two-point', lambda a, b: a <= b, 0, lambda x: x == 1,
                _max_join)
UNIT_INTERVAL = Cpo('unit-interval', lambda a, b: a <= b, Fraction(0),
                    lambda x: x == 1, _max_join)


def _nat_leq(a, b):
    if b is INF:
        return True
    if a is INF:
        return False
    return a <= b


NAT_INF = Cpo('nat-inf', _nat_leq, 0, lambda x: x is INF,
              lambda a, b: b if _nat_leq(a, b) else a)


def _flat_join(a, b):
    if a is None:
        return b
    if b is None or a is b:
        return a
    return NO_LUB


FLAT = Cpo('flat', lambda a, b: a is None or a is b, None,
           lambda x: x is not None, _flat_join)


def _suffix_join(a, b):
    if b.endswith(a):
        return b
    if a.endswith(b):
        return a
    return NO_LUB


# output buffers are stored newest character first, so growing a buffer
# extends it on the left; chronological prefix order is suffix order here
STRINGS = Cpo('strings', lambda a, b: b.endswith(a), '', lambda x: False,
              _suffix_join)


# ----------------------------------------------------------------------------
# Observations

class MonotonicityError(AssertionError):
    """An observation decreased along a step."""


@dataclass(frozen=True)
class Observation:
    name: str
    apply: object
    codomain: Cpo

    def __call__(self, state):
        return self.apply(state)


def obs_normal(relation, name='n'):
    """1 on normal states, 0 elsewhere."""
    return Observation(name, lambda s: 1 if relation.is_normal(s) else 0,
                       TWO_POINT)


def obs_value():
    """1 on values, 0 elsewhere."""
    return Observation('v', lambda t: 1 if is_value(t) else 0, TWO_POINT)


def obs_nf(relation, name='nf'):
    """The state itself once normal, bottom before."""
    return Observation(name, lambda s: s if relation.is_normal(s) else None,
                       FLAT)


@dataclass
class ObsChain:
    start: object
    relation: str
    prefix: list
    terminated: bool
    codomain: Cpo
    states: list = field(default_factory=list, repr=False)

    @property
    def limit(self):
        value = self.codomain.lub_chain(self.prefix)
        exact = self.terminated or self.codomain.is_maximal(value)
        return LimitApprox(value, len(self.prefix) - 1,
                           EXACT if exact else LOWER_BOUND)


EXACT = 'exact'
LOWER_BOUND = 'lower-bound'


@dataclass(frozen=True)
class LimitApprox:
    """A limit candidate.  ``status`` is ``EXACT`` only when the chain is
    known to be stationary from here on."""
    value: object
    depth: int
    status: str

    @property
    def exact(self):
        return self.status == EXACT


def observe_chain(start, relation, policy, obs, fuel):
    """Observation values along the policy-resolved sequence from
    ``start``."""
    if fuel < 1:
        raise ValueError('fuel must be >= 1')
    _, states, terminated = iterate(start, relation, policy, fuel)
    prefix = []
    for s in states:
        v = obs(s)
        if prefix and not obs.codomain.leq(prefix[-1], v):
            raise MonotonicityError('%s decreased: %r then %r'
                                    % (obs.name, prefix[-1], v))
        prefix.append(v)
    return ObsChain(start, relation.name, prefix, terminated, obs.codomain,
                    states)


class StateBudgetExceeded(RuntimeError):

    def __init__(self, budget):
        super().__init__('explored more than %d states' % budget)
        self.budget = budget


def limit_set_bruteforce(start, relation, obs, depth, budget=200000):
    """Limit candidates over all maximal sequences of length <= ``depth``.

    A sequence ending in a normal state, or in a state whose only successor
    is itself, has an exact limit.  A truncated one gives a lower bound,
    which is exact only if its value is maximal.
    """
    cpo = obs.codomain
    memo = {}
    visits = [0]

    def go(state, left):
        key = (state, left)
        hit = memo.get(key)
        if hit is not None:
            return hit
        visits[0] += 1
        if visits[0] > budget:
            raise StateBudgetExceeded(budget)
        succ = _distinct(relation.successors(state))
        v = obs(state)
        if not succ or succ == [state]:
            out = frozenset(((v, EXACT),))
        elif left == 0:
            out = frozenset(((v, EXACT if cpo.is_maximal(v)
                              else LOWER_BOUND),))
        else:
            acc = set()
            for s in succ:
                acc |= go(s, left - 1)
            out = frozenset(acc)
        memo[key] = out
        return out

    return {LimitApprox(v, depth, st) for v, st in go(start, depth)}


def denotation(limits, cpo):
    """``(greatest_exact, lub)`` of a limit set.

    The first is an exact limit above every other candidate, if there is
    one (else ``None``); the second is the join of all candidate values
    (``NO_LUB`` when they have no upper bound).
    """
    limits = list(limits)
    best = None
    for cand in limits:
        if cand.exact and all(cpo.leq(o.value, cand.value) for o in limits):
            best = cand.value
            break
    return best, cpo.lub(l.value for l in limits)


def all_obs_chains(start, relation, obs, depth, budget=200000):
    """Every observation chain along maximal sequences of length <=
    ``depth``, as a set of tuples."""
    memo = {}
    visits = [0]

    def go(state, left):
        key = (state, left)
        if key in memo:
            return memo[key]
        visits[0] += 1
        if visits[0] > budget:
            raise StateBudgetExceeded(budget)
        v = obs(state)
        succ = _distinct(relation.successors(state)) if left else []
        if not succ:
            out = frozenset(((v,),))
        else:
            out = frozenset((v,) + rest for s in succ
                            for rest in go(s, left - 1))
        memo[key] = out
        return out

    return set(go(start, depth))


# ----------------------------------------------------------------------------
# Checkers

@dataclass
class Report:
    check: str
    corpus_size: int
    violations: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def status(self):
        if self.violations:
            return 'fail'
        if self.inconclusive:
            return 'inconclusive'
        return 'pass'

    @property
    def ok(self):
        return not self.violations

    def violation(self, state, detail):
        self.violations.append({'state': render(state), 'detail': detail})

    def undecided(self, state, detail):
        self.inconclusive.append({'state': render(state), 'detail': detail})

    def to_dict(self):
        out = {'check': self.check, 'corpus_size': self.corpus_size,
               'violations': self.violations, 'status': self.status}
        if self.inconclusive:
            out['inconclusive'] = self.inconclusive
        if self.stats:
            out['stats'] = self.stats
        return out

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def check_monotonicity(relation, obs, corpus):
    rep = Report('monotonicity', len(corpus))
    steps = 0
    for t in corpus:
        v = obs(t)
        for s in _distinct(relation.successors(t)):
            steps += 1
            w = obs(s)
            if not obs.codomain.leq(v, w):
                rep.violation(t, '%s: %r not <= %r after step to %s'
                              % (obs.name, v, w, render(s)))
    rep.stats['steps'] = steps
    return rep


def check_neutrality(internal, obs, corpus):
    """Internal steps must leave the observation unchanged."""
    rep = Report('neutrality', len(corpus))
    steps = 0
    for t in corpus:
        v = obs(t)
        for s in _distinct(internal.successors(t)):
            steps += 1
            w = obs(s)
            if not obs.codomain.eq(v, w):
                rep.violation(t, '%s changed from %r to %r via %s'
                              % (obs.name, v, w, render(s)))
    rep.stats['steps'] = steps
    return rep


def _peaks(relation, t):
    succ = _distinct(relation.successors(t))
    for i, a in enumerate(succ):
        for b in succ[i + 1:]:
            yield a, b


def check_rd_diamond(relation, corpus, obs=None, check='rd-diamond'):
    """Every peak ``a <- t -> b`` with ``a != b`` joins in one step each
    (and, with ``obs``, has ``obs(a) == obs(b)``)."""
    rep = Report(check, len(corpus))
    peaks = 0
    for t in corpus:
        for a, b in _peaks(relation, t):
            peaks += 1
            if obs is not None and not obs.codomain.eq(obs(a), obs(b)):
                rep.violation(t, 'peak %s / %s: %s differs'
                              % (render(a), render(b), obs.name))
                continue
            if set(relation.successors(a)).isdisjoint(
                    relation.successors(b)):
                rep.violation(t, 'peak %s / %s has no one-step join'
                              % (render(a), render(b)))
    rep.stats['peaks'] = peaks
    return rep


def check_obs_diamond(relation, obs, corpus):
    return check_rd_diamond(relation, corpus, obs, check='obs-diamond')


def check_asymptotic_completeness(start, big, strategy, obs, depth,
                                  budget=200000):
    """Every exact limit of ``big`` must lie below some limit of
    ``strategy`` at the same depth.

    A missing dominator is a violation only if every strategy candidate is
    exact; otherwise a deeper run might still supply one, and the case is
    reported as inconclusive.
    """
    cpo = obs.codomain
    rep = Report('asymptotic-completeness', 1)
    lim_big = limit_set_bruteforce(start, big, obs, depth, budget)
    lim_s = limit_set_bruteforce(start, strategy, obs, depth, budget)
    for q in lim_big:
        if not q.exact:
            continue
        if any(cpo.leq(q.value, p.value) for p in lim_s):
            continue
        if all(p.exact for p in lim_s):
            rep.violation(start, 'limit %r of %s not dominated'
                          % (q.value, big.name))
        else:
            rep.undecided(start, 'limit %r of %s not dominated at depth %d'
                          % (q.value, big.name, depth))
    rep.stats.update(big=len(lim_big), strategy=len(lim_s))
    return rep
