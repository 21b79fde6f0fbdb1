"""Probabilistic lambda-calculi over multi-distributions.

A term step produces a multi-distribution: beta steps give ``[1 M']`` and a
choice ``M (+) N`` in surface position gives ``[1/2 M, 1/2 N]``.  Term steps
are lifted to multi-distributions entry by entry, either freely (an entry
may always stay put) or *fully* (only normal entries may stay).

The asymptotically normalizing strategy works entry-wise: surface steps
(which include the choice rule) while there are any, then the unbiased beta
strategy inside the surface-normal term, never firing a choice that is not
in surface position.

Weights are :class:`fractions.Fraction` throughout, and entries are never
merged: only the observation :func:`obs_N` identifies equal terms.
"""

import enum
import itertools
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from asymlam.qars import (LEFTMOST, NO_LUB, UNIT_INTERVAL, Cpo, Mode,
                          Observation, Relation, StateBudgetExceeded,
                          rational)
from asymlam.reduction import Ctx, Reduction, Rule, step
from asymlam.strategy import unbiased
from asymlam.syntax import pretty
from asymlam.terms import size

__all__ = [
    'MultiDist', 'SubDist', 'SUBDIST', 'Flavor', 'LiftMode', 'CBV', 'CBN',
    'term_step_prob', 'll_step', 'll_choices', 'lift', 'Lifted',
    'FreezeError', 'EntryBudgetExceeded', 'entry_budget', 'llfull_run',
    'ProbTrace', 'obs_N', 'obs_pn', 'obs_surface', 'OBS_N', 'OBS_PN',
    'prob_relation', 'surface_relation', 'll_relation', 'internal_relation',
    'STAY',
]

ONE = Fraction(1)


class MultiDist:
    """A finite multiset of ``(weight, term)`` entries, total weight <= 1."""
    __slots__ = ('entries', '_key', '_hash')

    def __init__(self, entries):
        entries = tuple((Fraction(w), t) for w, t in entries)
        for w, _ in entries:
            if not 0 < w <= 1:
                raise ValueError('weight out of (0, 1]: %s' % w)
        if sum(w for w, _ in entries) > 1:
            raise ValueError('total weight exceeds 1')
        self.entries = entries
        self._key = None
        self._hash = None

    @classmethod
    def point(cls, t):
        return cls(((ONE, t),))

    def key(self):
        if self._key is None:
            self._key = frozenset(Counter(self.entries).items())
        return self._key

    def __eq__(self, other):
        if not isinstance(other, MultiDist):
            return NotImplemented
        return len(self.entries) == len(other.entries) and \
            self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def mass(self):
        return sum((w for w, _ in self.entries), Fraction(0))

    def size(self):
        return sum(size(t) for _, t in self.entries)

    def scale(self, p):
        return [(p * w, t) for w, t in self.entries]

    def __str__(self):
        return '[%s]' % ', '.join('%s %s' % (_frac(w), pretty(t))
                                  for w, t in self.entries)

    def __repr__(self):
        return 'MultiDist(%s)' % self


def _frac(q):
    return str(q.numerator) if q.denominator == 1 else rational(q)


class SubDist:
    """A subdistribution over terms: term -> positive rational, mass <= 1."""
    __slots__ = ('support', '_hash')

    def __init__(self, support):
        self.support = {t: Fraction(p) for t, p in dict(support).items()
                        if p != 0}
        if self.mass() > 1:
            raise ValueError('mass exceeds 1')
        self._hash = None

    def mass(self):
        return sum(self.support.values(), Fraction(0))

    def __getitem__(self, t):
        return self.support.get(t, Fraction(0))

    def __len__(self):
        return len(self.support)

    def __eq__(self, other):
        if not isinstance(other, SubDist):
            return NotImplemented
        return self.support == other.support

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.support.items()))
        return self._hash

    def leq(self, other):
        return all(p <= other[t] for t, p in self.support.items())

    def to_dict(self):
        return {pretty(t): rational(p) for t, p in self.support.items()}

    def __str__(self):
        body = ', '.join('%s: %s' % (pretty(t), _frac(p))
                         for t, p in self.support.items())
        return '{%s}' % body

    def __repr__(self):
        return 'SubDist(%s)' % self


def _subdist_join(a, b):
    keys = set(a.support) | set(b.support)
    sup = {t: max(a[t], b[t]) for t in keys}
    if sum(sup.values()) > 1:
        return NO_LUB
    return SubDist(sup)


SUBDIST = Cpo('subdistributions', lambda a, b: a.leq(b), SubDist({}),
              lambda x: x.mass() == 1, _subdist_join)


# ----------------------------------------------------------------------------
# Flavors

@dataclass(frozen=True)
class _FlavorData:
    name: str
    full: Reduction
    surface: Reduction
    inner: Reduction


class Flavor(enum.Enum):
    CBV = _FlavorData(
        'cbv',
        Reduction('prob-cbv',
                  [(Rule.BETAV, Ctx.FULL), (Rule.OPLUS, Ctx.WEAK)]),
        Reduction('prob-cbv-surface',
                  [(Rule.BETAV, Ctx.WEAK), (Rule.OPLUS, Ctx.WEAK)]),
        unbiased(Rule.BETAV))
    CBN = _FlavorData(
        'cbn',
        Reduction('prob-cbn',
                  [(Rule.BETA, Ctx.FULL), (Rule.OPLUS, Ctx.HEAD)]),
        Reduction('prob-cbn-surface',
                  [(Rule.BETA, Ctx.HEAD), (Rule.OPLUS, Ctx.HEAD)]),
        unbiased(Rule.BETA))

    @property
    def full(self):
        return self.value.full

    @property
    def surface(self):
        return self.value.surface

    @property
    def inner(self):
        return self.value.inner

    def __str__(self):
        return self.value.name


CBV = Flavor.CBV
CBN = Flavor.CBN


class LiftMode(enum.Enum):
    LIFT = 'lift'
    FULL = 'full'


# ----------------------------------------------------------------------------
# Term-level steps into multi-distributions

def _dist_steps(rel, t):
    return [(r, MultiDist(step(t, r).branches)) for r in rel.redexes(t)]


def term_step_prob(t, flavor=CBV):
    """Every ``->``-step of ``t`` with its redex."""
    return _dist_steps(flavor.full, t)


def surface_steps(t, flavor=CBV):
    return _dist_steps(flavor.surface, t)


def ll_choices(t, flavor=CBV):
    """The strategy steps of ``t`` with their redexes: surface steps when
    there are any, else unbiased beta steps as point distributions."""
    if not flavor.surface.is_normal(t):
        return surface_steps(t, flavor)
    return [(r, MultiDist.point(step(t, r).term))
            for r in flavor.inner.redexes(t)]


def _ll_first(t, flavor):
    r = flavor.surface.first_redex(t)
    if r is not None:
        return r, MultiDist(step(t, r).branches)
    r = flavor.inner.first_redex(t)
    if r is None:
        return None
    return r, MultiDist.point(step(t, r).term)


def ll_step(t, flavor=CBV):
    return [m for _, m in ll_choices(t, flavor)]


def internal_steps(t, flavor=CBV):
    """The ``->``-steps of ``t`` that the strategy does not make."""
    ess = {m for _, m in ll_choices(t, flavor)}
    return [(r, m) for r, m in term_step_prob(t, flavor) if m not in ess]


# ----------------------------------------------------------------------------
# Lifting

STAY = 'stay'


class FreezeError(ValueError):
    """Full lifting asked to keep a reducible entry unchanged."""


class EntryBudgetExceeded(RuntimeError):

    def __init__(self, count, budget):
        super().__init__('multi-distribution has %d entries, budget is %d '
                         '(set ASYMLAM_ENTRY_BUDGET to raise it)'
                         % (count, budget))
        self.count = count
        self.budget = budget


def entry_budget():
    return int(os.environ.get('ASYMLAM_ENTRY_BUDGET', 1 << 16))


def _combine(m, results):
    out = []
    for (p, t), res in zip(m.entries, results):
        if res is STAY:
            out.append((p, t))
        else:
            out.extend(res.scale(p))
    return MultiDist(out)


def lift(m, choices, mode=LiftMode.LIFT, flavor=CBV, steps=term_step_prob):
    """Lift per-entry choices to one step on ``m``.

    ``choices[i]`` is ``STAY`` (or ``None``), a :class:`Redex` of the i-th
    term, or directly a multi-distribution the term steps to.  ``steps``
    gives the term-level relation the redexes are taken from.
    """
    if len(choices) != len(m):
        raise ValueError('need one choice per entry')
    results = []
    for (_, t), c in zip(m.entries, choices):
        if c is None or c is STAY:
            if mode is LiftMode.FULL and not flavor.full.is_normal(t):
                raise FreezeError('cannot keep reducible %s' % pretty(t))
            results.append(STAY)
        elif isinstance(c, MultiDist):
            if c not in {d for _, d in steps(t, flavor)}:
                raise ValueError('%s is not a successor of %s'
                                 % (c, pretty(t)))
            results.append(c)
        else:
            found = [d for r, d in steps(t, flavor) if r == c]
            if not found:
                raise ValueError('%r is not a step of %s' % (c, pretty(t)))
            results.append(found[0])
    return _combine(m, results)


class Lifted(Relation):
    """The (full) lifting of a term-level relation ``steps`` to
    multi-distributions.

    ``first`` optionally gives the leftmost term step without computing all
    of them.  Successor enumeration is the product of the per-entry choices
    and is meant for small states; runs only ever compute one per entry.
    """

    def __init__(self, name, steps, flavor, mode, first=None, normal=None,
                 max_product=100000):
        self.name = name
        self.steps = steps
        self.flavor = flavor
        self.mode = mode
        self.first = first
        self.normal = normal or flavor.full.is_normal
        self.max_product = max_product

    def _options(self, t):
        opts = [(r, d) for r, d in self.steps(t, self.flavor)]
        if self.mode is LiftMode.LIFT or self.normal(t):
            opts.append((STAY, STAY))
        return opts

    def labelled(self, m):
        per = [self._options(t) for _, t in m.entries]
        total = 1
        for o in per:
            total *= len(o)
        if total > self.max_product:
            raise StateBudgetExceeded(self.max_product)
        out = []
        for combo in itertools.product(*per):
            labels = tuple(r for r, _ in combo)
            out.append((labels, _combine(m, [d for _, d in combo])))
        return out

    def is_normal(self, m):
        return all(self.normal(t) for _, t in m.entries)

    def _one(self, t, policy, rng):
        if policy.mode in (Mode.LEFTMOST, Mode.PARALLEL):
            if self.first is not None:
                got = self.first(t, self.flavor)
            else:
                got = next(iter(self.steps(t, self.flavor)), None)
            if got is None:
                if self.mode is LiftMode.FULL and not self.normal(t):
                    raise FreezeError('no step for %s' % pretty(t))
                return STAY, STAY
            return got
        opts = self._options(t)
        if policy.mode is Mode.RIGHTMOST:
            moving = [o for o in opts if o[0] is not STAY]
            return moving[-1] if moving else opts[-1]
        return opts[rng.randrange(len(opts))]

    def pick(self, m, policy, rng, workers=None):
        if self.is_normal(m):
            return None
        if workers and policy.mode is Mode.PARALLEL:
            # entries evolve independently; map keeps them in order
            with ThreadPoolExecutor(workers) as pool:
                got = list(pool.map(lambda e: self._one(e[1], policy, rng),
                                    m.entries))
        else:
            got = [self._one(t, policy, rng) for _, t in m.entries]
        labels = tuple(r for r, _ in got)
        return labels, _combine(m, [d for _, d in got])


def prob_relation(flavor=CBV, mode=LiftMode.LIFT):
    """The lifting of ``->`` (choice plus beta)."""
    return Lifted('=>%s' % flavor, term_step_prob, flavor, mode)


def surface_relation(flavor=CBV, mode=LiftMode.FULL):
    """Lifted surface reduction; by default every surface-reducible entry
    must move."""
    return Lifted('surface-%s' % flavor, surface_steps, flavor, mode,
                  normal=flavor.surface.is_normal)


def ll_relation(flavor=CBV, mode=LiftMode.FULL):
    """The strategy, lifted fully by default."""
    return Lifted('ll%s-%s' % ('full' if mode is LiftMode.FULL else '',
                               flavor),
                  ll_choices, flavor, mode, first=_ll_first)


def internal_relation(flavor=CBV):
    """The lifting of the non-strategy steps."""
    return Lifted('internal-%s' % flavor, internal_steps, flavor,
                  LiftMode.LIFT)


# ----------------------------------------------------------------------------
# Observations

def obs_N(m, flavor=CBV):
    """The subdistribution of normal forms in ``m``."""
    acc = {}
    for w, t in m.entries:
        if flavor.full.is_normal(t):
            acc[t] = acc.get(t, Fraction(0)) + w
    return SubDist(acc)


def obs_pn(m, flavor=CBV):
    """Probability of being in normal form."""
    return obs_N(m, flavor).mass()


def obs_surface(m, flavor=CBV):
    """The subdistribution of surface normal forms in ``m``."""
    acc = {}
    for w, t in m.entries:
        if flavor.surface.is_normal(t):
            acc[t] = acc.get(t, Fraction(0)) + w
    return SubDist(acc)


def OBS_N(flavor=CBV):
    return Observation('N', lambda m: obs_N(m, flavor), SUBDIST)


def OBS_PN(flavor=CBV):
    return Observation('pn', lambda m: obs_pn(m, flavor), UNIT_INTERVAL)


# ----------------------------------------------------------------------------
# Runs

@dataclass
class ProbTrace:
    flavor: Flavor
    dists: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    terminated: bool = False

    @property
    def final(self):
        return self.dists[-1]

    def obs_pn(self):
        return [obs_pn(m, self.flavor) for m in self.dists]

    def obs_N(self):
        return [obs_N(m, self.flavor) for m in self.dists]

    def to_dict(self):
        steps = []
        for i, m in enumerate(self.dists):
            n = obs_N(m, self.flavor)
            steps.append({
                'i': i,
                'dist': [{'w': rational(w), 'term': pretty(t)}
                         for w, t in m.entries],
                'obs_pn': rational(n.mass()),
                'obs_N': n.to_dict(),
            })
        return {'flavor': str(self.flavor), 'steps': steps,
                'status': 'terminated' if self.terminated
                else 'fuel-exhausted'}


def llfull_run(m, flavor=CBV, scheduler=LEFTMOST, fuel=100, budget=None,
               relation=None, workers=None):
    """Run the fully lifted strategy (or ``relation``) from ``m``.

    ``scheduler`` resolves the per-entry choice; ``budget`` caps the number
    of entries (default :func:`entry_budget`).
    """
    if not isinstance(m, MultiDist):
        m = MultiDist.point(m)
    rel = relation or ll_relation(flavor)
    budget = entry_budget() if budget is None else budget
    rng = scheduler.rng()
    trace = ProbTrace(flavor, [m])
    for _ in range(fuel):
        if isinstance(rel, Lifted):
            got = rel.pick(m, scheduler, rng, workers)
        else:
            got = rel.pick(m, scheduler, rng)
        if got is None:
            trace.terminated = True
            return trace
        label, m = got
        if len(m) > budget:
            raise EntryBudgetExceeded(len(m), budget)
        trace.labels.append(label)
        trace.dists.append(m)
    trace.terminated = rel.is_normal(m)
    return trace
