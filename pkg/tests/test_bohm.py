import pytest
from hypothesis import given

from asymlam import parse
from asymlam.bohm import (OBS_OMEGA, OMEGA, Head, ImpureTermError, PNF,
                          bt_approx, leftmost_approx, pnf_join, pnf_leq,
                          pnf_of, pnf_pretty, pnf_tree)
from asymlam.reduction import BETA_FULL, Rule
from asymlam.qars import Difference, check_monotonicity, check_neutrality
from asymlam.strategy import unbiased
from asymlam.terms import Idx, Var

from conftest import pure_terms

D = r'(\x.x x)'
DZ = r'(\x.z (x x))'
z = Var('z')


def show(chain):
    return [pnf_pretty(p) for p in chain]


def test_pnf_of_examples():
    assert pnf_of(parse(D + D)) is OMEGA
    assert pnf_of(parse(r'\x.x')) == Head(1, Idx(0), ())
    assert pnf_of(parse(r'z (%s %s) ((\x.x) z)' % (D, D))) == Head(
        0, z, (OMEGA, OMEGA))
    assert pnf_of(parse(r'\x.(\y.y) x')) is OMEGA


def test_pnf_order():
    zo = Head(0, z, (OMEGA,))
    assert pnf_leq(OMEGA, zo)
    assert pnf_leq(zo, Head(0, z, (zo,)))
    assert not pnf_leq(pnf_of(parse(r'\x.x')), pnf_of(parse(r'\x.x x')))
    assert not pnf_leq(zo, OMEGA)
    assert pnf_join(zo, Head(0, z, (pnf_of(z),))) == Head(0, z, (pnf_of(z),))
    assert PNF.is_maximal(pnf_of(parse('z z'))) and not PNF.is_maximal(zo)


def test_pretty_and_tree():
    p = pnf_of(parse(r'\x y.x (z y) ((\x.x) z)'))
    assert pnf_pretty(p) == r'\x y.x (z y) _|_'
    assert pnf_pretty(p, unicode=True) == 'λx y.x (z y) Ω'
    assert pnf_tree(p) == {
        'binders': ['x', 'y'], 'head': 'x',
        'args': [{'binders': [], 'head': 'z',
                  'args': [{'binders': [], 'head': 'y', 'args': []}]},
                 {'omega': True}]}


def test_spine():
    got = bt_approx(parse(DZ + DZ), 3)
    assert show(got) == ['_|_', 'z _|_', 'z (z _|_)', 'z (z (z _|_))']


def test_breadth_first_beats_leftmost():
    t = parse(r'z (%s %s) ((\x.x) z)' % (D, D))
    assert show(bt_approx(t, 2)) == ['z _|_ _|_', 'z _|_ z', 'z _|_ z']
    assert show(leftmost_approx(t, 4)) == ['z _|_ _|_'] * 5


def test_constant_chains():
    assert show(bt_approx(parse(r'\x.%s %s' % (D, D)), 4)) == ['_|_'] * 5
    assert show(bt_approx(parse(r'\x.x'), 2)) == [r'\x.x'] * 3
    assert bt_approx(parse(r'\x.x'), 2).top == pnf_of(parse(r'\y.y'))


def test_impure_rejected():
    with pytest.raises(ImpureTermError):
        bt_approx(parse('a (+) b'), 2)


@given(pure_terms)
def test_omega_laws(t):
    assert check_monotonicity(BETA_FULL, OBS_OMEGA, [t]).ok
    internal = Difference(BETA_FULL, unbiased(Rule.BETA))
    assert check_neutrality(internal, OBS_OMEGA, [t]).ok


@given(pure_terms)
def test_bt_chain_monotone(t):
    chain = bt_approx(t, 6).approximants
    for a, b in zip(chain, chain[1:]):
        assert pnf_leq(a, b)
