import pytest
from hypothesis import given

from asymlam import parse, pretty
from asymlam.terms import (BODY, ARG, FUN, OPLUS, App, Idx, InvalidPosition,
                           Lam, Op, Var, alpha_eq, free_vars, is_value,
                           positions, replace_at, size, subst, subterm_at)

from conftest import prob_terms, pure_terms

I = parse(r'\x.x')


def test_parse_identity():
    assert parse(r'\x.x') == Lam(Idx(0))


def test_parse_delta():
    assert parse(r'\x.x x') == Lam(App(Idx(0), Idx(0)))


def test_parse_delta_plus():
    assert parse(r'\x. (\y.y) (+) (x x)') == Lam(
        Op(OPLUS, [I, App(Idx(0), Idx(0))]))


def test_subst_examples():
    x, y, z = Var('x'), Var('y'), Var('z')
    assert subst(App(x, x), 'x', I) == App(I, I)
    # the binder of \y.x cannot capture the substituted y
    got = subst(Lam(x), 'x', y)
    assert got == Lam(y)
    assert pretty(got) == r'\x.y'
    assert subst(I, 'x', z) == I


def test_subst_capture_named():
    t = subst(parse(r'\y.x y'), 'x', parse('y'))
    assert pretty(t) == r'\x.y x'
    assert free_vars(t) == {'y'}


@pytest.mark.parametrize('src, expected', [
    (r'\z.(\x.x x)(\x.x x)', True), (r'(\x.x)(\x.x)', False), ('x', True),
    (r'x (+) y', False)])
def test_is_value(src, expected):
    assert is_value(parse(src)) is expected


def test_alpha_eq():
    assert alpha_eq(parse(r'\x.x'), parse(r'\y.y'))
    assert not alpha_eq(parse(r'\x.x y'), parse(r'\y.y y'))
    a = parse(r'(\x.(\z.z) (+) x x) (\x.(\z.z) (+) x x)')
    b = parse(r'(\u.(\v.v) (+) u u) (\w.(\x.x) (+) w w)')
    assert alpha_eq(a, b)


def test_positions():
    t = parse(r'(\x.x) ((\x.x x)(\x.x x))')
    assert replace_at(t, (ARG,), Var('z')) == parse(r'(\x.x) z')
    assert subterm_at(parse(r'\x.x x'), (BODY,)) == App(Idx(0), Idx(0))
    with pytest.raises(InvalidPosition):
        subterm_at(t, (BODY,))
    with pytest.raises(InvalidPosition):
        subterm_at(t, (FUN, BODY, FUN))


def test_size():
    assert size(parse(r'\x.x x')) == 4


@given(prob_terms)
def test_round_trip(t):
    assert parse(pretty(t)) == t
    assert parse(pretty(t, unicode=True)) == t


@given(pure_terms)
def test_replace_after_extract(t):
    for pos in positions(t):
        assert replace_at(t, pos, subterm_at(t, pos)) == t


@given(pure_terms, pure_terms)
def test_subst_free_vars(t, s):
    got = subst(t, 'x', s)
    expected = free_vars(t) - {'x'}
    if 'x' in free_vars(t):
        expected |= free_vars(s)
    assert free_vars(got) == expected


@given(pure_terms, pure_terms, pure_terms)
def test_alpha_eq_equivalence(a, b, c):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)
    if alpha_eq(a, b) and alpha_eq(b, c):
        assert alpha_eq(a, c)


def test_terms_are_shared():
    # hash-consing: structurally equal terms are the same object
    assert parse(r'\x.x x') is parse(r'\y.y y')
