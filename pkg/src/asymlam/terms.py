"""Lambda-terms with operator symbols, in a locally nameless encoding.

Bound variables are de Bruijn indices (``Idx``), free variables are names
(``Var``).  Every node is hash-consed: building a node that is structurally
equal to a live one returns the existing object.  Since binder names are not
stored, two terms are alpha-equivalent exactly when they are the same object,
so ``==`` and ``hash`` are identity based and cheap.

Names exist only at the concrete-syntax boundary: the parser resolves them,
the printer invents them (see :mod:`asymlam.syntax`).
"""

import threading
import weakref
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    'OpSym', 'OPLUS', 'TICK', 'print_op', 'Term', 'Var', 'Idx', 'Lam', 'App',
    'Op', 'lams', 'apps', 'is_value', 'free_vars', 'size', 'subst',
    'instantiate', 'abstract', 'alpha_eq', 'subterm_at', 'replace_at',
    'positions', 'InvalidPosition', 'operators_in', 'is_pure', 'is_closed',
    'FUN', 'ARG', 'BODY',
]


@dataclass(frozen=True)
class OpSym:
    """An operator symbol with a fixed arity."""
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError('operator arity must be >= 1: %r' % (self,))

    def __repr__(self):
        return 'OpSym(%s/%d)' % (self.name, self.arity)


OPLUS = OpSym('+', 2)
TICK = OpSym('tick', 1)


@lru_cache(maxsize=None)
def print_op(char):
    if len(char) != 1 or char in '[]':
        raise ValueError('print operator needs a single character, got %r'
                         % (char,))
    return OpSym('print[%s]' % char, 1)


# ----------------------------------------------------------------------------
# Nodes

_table = weakref.WeakValueDictionary()
_lock = threading.Lock()


class Term:
    """Base class of the hash-consed term nodes."""
    __slots__ = ('__weakref__',)

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __reduce__(self):
        return (type(self), self._fields())

    def __str__(self):
        from asymlam.syntax import pretty
        return pretty(self)


def _intern(cls, key, init):
    node = _table.get(key)
    if node is not None:
        return node
    with _lock:
        node = _table.get(key)
        if node is None:
            node = object.__new__(cls)
            init(node)
            _table[key] = node
    return node


class Var(Term):
    """A free variable."""
    __slots__ = ('name',)

    def __new__(cls, name):
        if not isinstance(name, str) or not name:
            raise TypeError('variable name must be a non-empty string')

        def init(node):
            object.__setattr__(node, 'name', name)
        return _intern(cls, ('V', name), init)

    def _fields(self):
        return (self.name,)

    def __repr__(self):
        return 'Var(%r)' % self.name


class Idx(Term):
    """A bound variable, as a de Bruijn index."""
    __slots__ = ('index',)

    def __new__(cls, index):
        if index < 0:
            raise ValueError('negative de Bruijn index')

        def init(node):
            node.index = index
        return _intern(cls, ('I', index), init)

    def _fields(self):
        return (self.index,)

    def __repr__(self):
        return 'Idx(%d)' % self.index


class Lam(Term):
    __slots__ = ('body',)

    def __new__(cls, body):
        def init(node):
            node.body = body
        return _intern(cls, ('L', body), init)

    def _fields(self):
        return (self.body,)

    def __repr__(self):
        return 'Lam(%r)' % (self.body,)


class App(Term):
    __slots__ = ('fun', 'arg')

    def __new__(cls, fun, arg):
        def init(node):
            node.fun = fun
            node.arg = arg
        return _intern(cls, ('A', fun, arg), init)

    def _fields(self):
        return (self.fun, self.arg)

    def __repr__(self):
        return 'App(%r, %r)' % (self.fun, self.arg)


class Op(Term):
    __slots__ = ('sym', 'args')

    def __new__(cls, sym, args):
        args = tuple(args)
        if len(args) != sym.arity:
            raise ValueError('%s expects %d arguments, got %d'
                             % (sym.name, sym.arity, len(args)))

        def init(node):
            node.sym = sym
            node.args = args
        return _intern(cls, ('O', sym) + args, init)

    def _fields(self):
        return (self.sym, self.args)

    def __repr__(self):
        return 'Op(%s, %r)' % (self.sym.name, list(self.args))


def lams(n, body):
    for _ in range(n):
        body = Lam(body)
    return body


def apps(head, *args):
    for a in args:
        head = App(head, a)
    return head


# ----------------------------------------------------------------------------
# Basic queries

def is_value(t):
    return isinstance(t, (Var, Idx, Lam))


def alpha_eq(a, b):
    return a is b


@lru_cache(maxsize=1 << 18)
def size(t):
    if isinstance(t, Lam):
        return 1 + size(t.body)
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    if isinstance(t, Op):
        return 1 + sum(size(a) for a in t.args)
    return 1


@lru_cache(maxsize=1 << 18)
def free_vars(t):
    """Names of the free variables of ``t`` (loose indices excluded)."""
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Idx):
        return frozenset()
    if isinstance(t, Lam):
        return free_vars(t.body)
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    out = frozenset()
    for a in t.args:
        out |= free_vars(a)
    return out


@lru_cache(maxsize=1 << 18)
def _loose(t):
    # 1 + the largest loose de Bruijn index; 0 when there is none
    if isinstance(t, Idx):
        return t.index + 1
    if isinstance(t, Var):
        return 0
    if isinstance(t, Lam):
        return max(_loose(t.body) - 1, 0)
    if isinstance(t, App):
        return max(_loose(t.fun), _loose(t.arg))
    return max((_loose(a) for a in t.args), default=0)


def is_closed(t):
    return _loose(t) == 0 and not free_vars(t)


@lru_cache(maxsize=1 << 16)
def operators_in(t):
    if isinstance(t, Lam):
        return operators_in(t.body)
    if isinstance(t, App):
        return operators_in(t.fun) | operators_in(t.arg)
    if isinstance(t, Op):
        out = frozenset((t.sym,))
        for a in t.args:
            out |= operators_in(a)
        return out
    return frozenset()


def is_pure(t):
    return not operators_in(t)


# ----------------------------------------------------------------------------
# Substitution

@lru_cache(maxsize=1 << 18)
def _shift(t, by, cutoff=0):
    if by == 0 or _loose(t) <= cutoff:
        return t
    if isinstance(t, Idx):
        return Idx(t.index + by) if t.index >= cutoff else t
    if isinstance(t, Lam):
        return Lam(_shift(t.body, by, cutoff + 1))
    if isinstance(t, App):
        return App(_shift(t.fun, by, cutoff), _shift(t.arg, by, cutoff))
    return Op(t.sym, [_shift(a, by, cutoff) for a in t.args])


def instantiate(body, val):
    """Open the body of an abstraction with ``val``.

    ``body`` lives under one binder (index 0 refers to it); ``val`` lives
    outside it.  Returns the body with index 0 replaced by ``val`` and the
    remaining loose indices lowered by one.  This is the beta contractum.
    """
    memo = {}

    def go(t, depth):
        if _loose(t) <= depth:
            return t
        key = (t, depth)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(t, Idx):
            if t.index == depth:
                out = _shift(val, depth)
            else:
                out = Idx(t.index - 1)
        elif isinstance(t, Lam):
            out = Lam(go(t.body, depth + 1))
        elif isinstance(t, App):
            out = App(go(t.fun, depth), go(t.arg, depth))
        else:
            out = Op(t.sym, [go(a, depth) for a in t.args])
        memo[key] = out
        return out

    return go(body, 0)


def abstract(name, t):
    """Bind the free variable ``name`` in ``t``: the body of ``\\name. t``."""

    def go(t, depth):
        if isinstance(t, Var):
            return Idx(depth) if t.name == name else t
        if name not in free_vars(t):
            return _shift(t, 1, depth)
        if isinstance(t, Lam):
            return Lam(go(t.body, depth + 1))
        if isinstance(t, App):
            return App(go(t.fun, depth), go(t.arg, depth))
        return Op(t.sym, [go(a, depth) for a in t.args])

    return go(t, 0)


def subst(body, var, val):
    """Capture-avoiding substitution ``body{var := val}`` of a free variable.

    Bound variables are indices, so capture cannot happen: going under a
    binder shifts the loose indices of ``val``.
    """
    if isinstance(var, Var):
        var = var.name
    memo = {}

    def go(t, depth):
        if var not in free_vars(t):
            return t
        key = (t, depth)
        if key in memo:
            return memo[key]
        if isinstance(t, Var):
            out = _shift(val, depth)
        elif isinstance(t, Lam):
            out = Lam(go(t.body, depth + 1))
        elif isinstance(t, App):
            out = App(go(t.fun, depth), go(t.arg, depth))
        else:
            out = Op(t.sym, [go(a, depth) for a in t.args])
        memo[key] = out
        return out

    return go(body, 0)


# ----------------------------------------------------------------------------
# Positions
#
# A position is a tuple of selectors: FUN / ARG into an application, BODY into
# an abstraction, an int i into the i-th operator argument.

FUN = 'fun'
ARG = 'arg'
BODY = 'body'


class InvalidPosition(LookupError):
    pass


def _child(t, sel):
    if sel == FUN and isinstance(t, App):
        return t.fun
    if sel == ARG and isinstance(t, App):
        return t.arg
    if sel == BODY and isinstance(t, Lam):
        return t.body
    if isinstance(sel, int) and isinstance(t, Op) and 0 <= sel < len(t.args):
        return t.args[sel]
    raise InvalidPosition('no %r child in %r' % (sel, type(t).__name__))


def subterm_at(t, pos):
    for sel in pos:
        t = _child(t, sel)
    return t


def replace_at(t, pos, new):
    if not pos:
        return new
    sel, rest = pos[0], pos[1:]
    child = replace_at(_child(t, sel), rest, new)
    if sel == FUN:
        return App(child, t.arg)
    if sel == ARG:
        return App(t.fun, child)
    if sel == BODY:
        return Lam(child)
    args = list(t.args)
    args[sel] = child
    return Op(t.sym, args)


def positions(t):
    """All positions of ``t`` in pre-order (outermost first, then left to
    right)."""
    out = []

    def go(t, pos):
        out.append(pos)
        if isinstance(t, Lam):
            go(t.body, pos + (BODY,))
        elif isinstance(t, App):
            go(t.fun, pos + (FUN,))
            go(t.arg, pos + (ARG,))
        elif isinstance(t, Op):
            for i, a in enumerate(t.args):
                go(a, pos + (i,))

    go(t, ())
    return out
