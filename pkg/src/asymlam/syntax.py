"""Concrete syntax: tokenizer, parser and canonical printer.

Grammar (ASCII, with ``λ`` and ``⊕`` accepted as aliases of ``\\`` and
``(+)``)::

    term  ::= "\\" var+ "." term | sum
    sum   ::= app [ "(+)" term ]            -- right associative
    app   ::= atom+ [ "\\" var+ "." term ]  -- left associative
    atom  ::= var | "(" term ")"
            | "tick" "(" term ")"
            | "print" "[" char "]" "(" term ")"
            | opname "(" term { "," term } ")"

Application binds tighter than ``(+)`` and an abstraction body extends as far
to the right as possible.  Names not bound by an enclosing abstraction are
free variables.

The printer never reuses the binder names of the source (they are not kept):
it picks them from a fixed pool, skipping the free names of the term, so
alpha-equal terms print identically.
"""

import re
from dataclasses import dataclass, field

from asymlam.terms import (OPLUS, TICK, App, Idx, Lam, Op, Var,
                           abstract, free_vars, print_op)

__all__ = ['ParseError', 'UnknownOperatorError', 'ArityError', 'Operators',
           'DEFAULT_OPERATORS', 'parse', 'pretty', 'binder_names']


class ParseError(ValueError):
    """Malformed input; ``line`` and ``col`` are 1-based."""

    def __init__(self, msg, line=None, col=None):
        self.msg = msg
        self.line = line
        self.col = col
        where = '' if line is None else ' at line %d, column %d' % (line, col)
        super().__init__(msg + where)


class UnknownOperatorError(ParseError):
    pass


class ArityError(ParseError):
    pass


@dataclass(frozen=True)
class Operators:
    """The operator symbols a parser accepts.

    ``alphabet=None`` accepts ``print[c]`` for every character ``c``; a string
    restricts it to those characters.  ``extra`` holds further symbols, which
    are written in call syntax ``name(a, b, ...)``.
    """
    oplus: bool = True
    tick: bool = True
    alphabet: str | None = None
    extra: tuple = field(default=())

    def allows(self, sym):
        if sym == OPLUS:
            return self.oplus
        if sym == TICK:
            return self.tick
        if sym.name.startswith('print['):
            return sym.arity == 1 and (
                self.alphabet is None or sym.name[6] in self.alphabet)
        return sym in self.extra

    def keywords(self):
        return {'tick', 'print'} | {s.name for s in self.extra}


DEFAULT_OPERATORS = Operators()
PURE = Operators(oplus=False, tick=False, alphabet='')


# ----------------------------------------------------------------------------
# Tokens

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<oplus>\(\+\)|⊕)
  | (?P<lam>\\|λ)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[().,\[\]])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src):
    toks = []
    i = 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if m is None:
            # a single character, which print[c] may still want
            toks.append(_Tok('char', src[i], i))
            i += 1
            continue
        if m.lastgroup != 'ws':
            toks.append(_Tok(m.lastgroup, m.group(), i))
        i = m.end()
    toks.append(_Tok('eof', '', len(src)))
    return toks


def _linecol(src, pos):
    line = src.count('\n', 0, pos) + 1
    col = pos - (src.rfind('\n', 0, pos) + 1) + 1
    return line, col


class _Parser:

    def __init__(self, src, ops):
        self.src = src
        self.ops = ops
        self.keywords = ops.keywords()
        self.extra = {s.name: s for s in ops.extra}
        self.toks = _tokenize(src)
        self.i = 0

    # helpers

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        line, col = _linecol(self.src, tok.pos)
        raise cls(msg, line, col)

    def expect(self, text):
        tok = self.peek()
        if tok.text != text:
            found = tok.text or 'end of input'
            self.fail('expected %r, found %r' % (text, found))
        return self.next()

    def check_op(self, sym, tok):
        if not self.ops.allows(sym):
            self.fail('unknown operator %s' % sym.name, tok,
                      UnknownOperatorError)

    def starts_atom(self, tok):
        return tok.kind == 'name' or tok.text == '('

    # grammar

    def parse(self):
        t = self.term()
        if self.peek().kind != 'eof':
            self.fail('unexpected %r' % self.peek().text)
        return t

    def term(self):
        if self.peek().kind == 'lam':
            return self.lam()
        return self.sum()

    def lam(self):
        self.next()
        names = []
        while self.peek().kind == 'name':
            tok = self.next()
            if tok.text in self.keywords:
                self.fail('%r cannot be a variable' % tok.text, tok)
            names.append(tok.text)
        if not names:
            self.fail('expected a variable after lambda')
        self.expect('.')
        body = self.term()
        return _bind(names, body)

    def sum(self):
        left = self.app()
        tok = self.peek()
        if tok.kind == 'oplus':
            self.next()
            self.check_op(OPLUS, tok)
            return Op(OPLUS, [left, self.term()])
        return left

    def app(self):
        if not self.starts_atom(self.peek()):
            self.fail('expected a term, found %r'
                      % (self.peek().text or 'end of input'))
        t = self.atom()
        while True:
            tok = self.peek()
            if self.starts_atom(tok):
                t = App(t, self.atom())
            elif tok.kind == 'lam':
                return App(t, self.lam())
            else:
                return t

    def atom(self):
        tok = self.next()
        if tok.text == '(':
            t = self.term()
            self.expect(')')
            return t
        name = tok.text
        if name == 'tick':
            self.check_op(TICK, tok)
            return Op(TICK, self.call_args(TICK, tok))
        if name == 'print':
            self.expect('[')
            ch = self.next()
            if len(ch.text) != 1:
                self.fail('print expects a single character', ch)
            self.expect(']')
            sym = print_op(ch.text)
            self.check_op(sym, tok)
            return Op(sym, self.call_args(sym, tok))
        if name in self.extra:
            sym = self.extra[name]
            return Op(sym, self.call_args(sym, tok))
        return Var(name)

    def call_args(self, sym, tok):
        self.expect('(')
        args = [self.term()]
        while self.peek().text == ',':
            self.next()
            args.append(self.term())
        self.expect(')')
        if len(args) != sym.arity:
            self.fail('%s expects %d argument(s), got %d'
                      % (sym.name, sym.arity, len(args)), tok, ArityError)
        return args


def _bind(names, body):
    for name in reversed(names):
        body = Lam(abstract(name, body))
    return body


def parse(src, operators=DEFAULT_OPERATORS):
    """Parse concrete syntax into a :class:`~asymlam.terms.Term`."""
    return _Parser(src, operators).parse()


# ----------------------------------------------------------------------------
# Printing

_POOL = ('x', 'y', 'z', 'w', 'u', 'v')
_RESERVED = frozenset(('tick', 'print'))


def binder_names(avoid):
    """Endless supply of binder names, skipping ``avoid``."""
    n = 0
    while True:
        for base in _POOL:
            name = base if n == 0 else '%s%d' % (base, n)
            if name not in avoid and name not in _RESERVED:
                yield name
        n += 1


# precedence levels of the position a subterm is printed in
_TOP, _SUM_LEFT, _FUN, _ARG = range(4)


def pretty(t, unicode=False):
    """Canonical concrete syntax; ``parse(pretty(t)) is t``."""
    supply = binder_names(free_vars(t))
    pool = []
    lam_sym, plus_sym = ('λ', ' ⊕ ') if unicode else ('\\', ' (+) ')

    def name_at(depth):
        while len(pool) <= depth:
            pool.append(next(supply))
        return pool[depth]

    def go(t, env, level):
        # env: list of binder names, innermost last
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Idx):
            if t.index >= len(env):
                return '#%d' % (t.index - len(env))
            return env[-1 - t.index]
        if isinstance(t, Lam):
            names = []
            while isinstance(t, Lam):
                names.append(name_at(len(env) + len(names)))
                t = t.body
            body = go(t, env + names, _TOP)
            s = '%s%s.%s' % (lam_sym, ' '.join(names), body)
            return s if level == _TOP else '(%s)' % s
        if isinstance(t, App):
            s = '%s %s' % (go(t.fun, env, _FUN), go(t.arg, env, _ARG))
            return '(%s)' % s if level == _ARG else s
        if t.sym == OPLUS:
            s = '%s%s%s' % (go(t.args[0], env, _SUM_LEFT), plus_sym,
                            go(t.args[1], env, _TOP))
            return s if level == _TOP else '(%s)' % s
        inner = ', '.join(go(a, env, _TOP) for a in t.args)
        return '%s(%s)' % (t.sym.name, inner)

    return go(t, [], _TOP)
