import pytest

from asymlam import parse, pretty
from asymlam.syntax import (PURE, ArityError, Operators, ParseError,
                            UnknownOperatorError)
from asymlam.terms import OPLUS, TICK, Op, OpSym, print_op


def test_application_left_assoc_and_plus_loosest():
    assert parse('a b c') == parse('(a b) c')
    assert parse('a b (+) c d') == Op(OPLUS, [parse('a b'), parse('c d')])


def test_plus_right_assoc():
    assert parse('a (+) b (+) c') == parse('a (+) (b (+) c)')


def test_lambda_extends_right():
    assert parse(r'\x.x y (+) z') == parse(r'\x.(x y (+) z)')


def test_multi_binder_and_unicode():
    assert parse(r'\x y.x') == parse(r'\x.\y.x') == parse('λx y.x')
    assert parse('a ⊕ b') == parse('a (+) b')


def test_effect_operators():
    t = parse(r'print[0](\x.x) tick(y)')
    assert t.fun.sym == print_op('0')
    assert t.arg.sym == TICK
    assert pretty(t) == r'print[0](\x.x) tick(y)'


def test_error_location():
    with pytest.raises(ParseError) as exc:
        parse('\\x.x\n  )')
    assert (exc.value.line, exc.value.col) == (2, 3)


def test_unknown_operator():
    with pytest.raises(UnknownOperatorError):
        parse('a (+) b', PURE)
    with pytest.raises(UnknownOperatorError):
        parse('print[a](x)', Operators(alphabet='01'))


def test_arity():
    with pytest.raises(ArityError):
        parse('tick(a, b)')
    pair = OpSym('pair', 2)
    t = parse('pair(a, b)', Operators(extra=(pair,)))
    assert t == Op(pair, [parse('a'), parse('b')])
    with pytest.raises(ArityError):
        parse('pair(a)', Operators(extra=(pair,)))


@pytest.mark.parametrize('src', ['', r'\.x', '(a', 'a)', r'\x', 'print[](x)'])
def test_syntax_errors(src):
    with pytest.raises(ParseError):
        parse(src)


def test_printer_avoids_free_names():
    t = parse(r'\y.x y')
    assert pretty(t) == r'\y.x y'
    assert parse(pretty(parse(r'\a.\b.x a b'))) == parse(r'\a.\b.x a b')
