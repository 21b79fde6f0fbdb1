"""Term corpora: seeded random generation and exhaustive enumeration.

Random terms are skewed towards application spines and explicit redexes so
that checkers have something to chew on.  Sizes count every node (variable,
abstraction, application, operator) as 1.
"""

import random
from functools import lru_cache

from asymlam.terms import (OPLUS, TICK, App, Idx, Lam, Op, Var, abstract,
                           free_vars, print_op, size)

__all__ = ['random_term', 'corpus', 'enumerate_terms', 'terms_up_to',
           'parse_gen_spec']


def random_term(rng, max_size, ops=(), free=('x', 'y'), closed=False):
    """A random term of size at most ``max_size``.

    ``ops`` lists the operator symbols that may occur.  With
    ``closed=True`` the result has no free variables: it is generated over
    one free name which is then abstracted.
    """
    if closed:
        free = ('x',)
        max_size -= 1
    if max_size < 1:
        raise ValueError('size budget too small')
    ops = tuple(ops)

    def leaf(depth):
        names = [Idx(i) for i in range(depth)] + [Var(n) for n in free]
        return rng.choice(names)

    def gen(n, depth):
        if n == 1:
            return leaf(depth)
        choices = ['app', 'lam', 'leaf']
        weights = [5, 3, 1]
        if n >= 4:
            choices.append('redex')
            weights.append(4)
        for sym in ops:
            if n >= 1 + sym.arity:
                choices.append(sym)
                weights.append(2)
        kind = rng.choices(choices, weights)[0]
        if kind == 'leaf':
            return leaf(depth)
        if kind == 'lam':
            return Lam(gen(n - 1, depth + 1))
        if kind == 'app' and n >= 3:
            k = rng.randint(1, n - 2)
            return App(gen(k, depth), gen(rng.randint(1, n - 1 - k), depth))
        if kind == 'redex':
            k = rng.randint(1, n - 3)
            body = gen(k, depth + 1)
            return App(Lam(body), gen(rng.randint(1, n - 2 - k), depth))
        if isinstance(kind, type(OPLUS)):
            budget = n - 1
            args = []
            for i in range(kind.arity):
                rest = kind.arity - i - 1
                k = rng.randint(1, budget - rest)
                args.append(gen(k, depth))
                budget -= k
            return Op(kind, args)
        return Lam(gen(n - 1, depth + 1))

    t = gen(rng.randint(1, max_size), 0)
    if closed:
        t = Lam(abstract('x', t)) if 'x' in free_vars(t) else Lam(t)
    assert size(t) <= max_size + (1 if closed else 0)
    return t


_CALCULUS_OPS = {
    'pure-cbn': ((), False),
    'pure-cbv': ((), False),
    'prob-cbn': ((OPLUS,), False),
    'prob-cbv': ((OPLUS,), False),
    'payoff': ((TICK,), True),
    'output': ((print_op('0'), print_op('1')), True),
}


def corpus(calculus, max_size=8, count=100, seed=0, distinct=True):
    """``count`` random terms suited to ``calculus`` (see the CLI names)."""
    ops, closed = _CALCULUS_OPS[calculus]
    rng = random.Random(seed)
    out = []
    seen = set()
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        t = random_term(rng, max_size, ops, closed=closed)
        if distinct and t in seen:
            continue
        seen.add(t)
        out.append(t)
    return out


@lru_cache(maxsize=None)
def enumerate_terms(n, depth=0, free=()):
    """All pure terms of exactly size ``n`` with loose indices below
    ``depth`` and free variables among ``free``."""
    if n < 1:
        return ()
    out = []
    if n == 1:
        out.extend(Idx(i) for i in range(depth))
        out.extend(Var(v) for v in free)
        return tuple(out)
    out.extend(Lam(b) for b in enumerate_terms(n - 1, depth + 1, free))
    for k in range(1, n - 1):
        for f in enumerate_terms(k, depth, free):
            for a in enumerate_terms(n - 1 - k, depth, free):
                out.append(App(f, a))
    return tuple(out)


def terms_up_to(n, free=()):
    """All pure terms of size 1..n (closed unless ``free`` names some
    variables)."""
    out = []
    for k in range(1, n + 1):
        out.extend(enumerate_terms(k, 0, tuple(free)))
    return out


def parse_gen_spec(spec):
    """``"size=8,count=500,seed=7"`` -> dict of ints."""
    out = {'size': 8, 'count': 100, 'seed': 0}
    for part in filter(None, spec.split(',')):
        key, sep, val = part.partition('=')
        key = key.strip()
        if not sep or key not in out:
            raise ValueError('bad generator spec item %r' % part)
        out[key] = int(val)
    return out
