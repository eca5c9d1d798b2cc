from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.orderings import grevlex as sym_grevlex
from sympy.polys.orderings import lex as sym_lex

from asaut.errors import FieldMismatch, VarSetMismatch
from asaut.ff2 import field_create
from asaut.mpoly import (
    MPoly,
    VarSet,
    binom_mod2,
    formal_derivative,
    grevlex,
    lex,
    monomial_order,
)

from .conftest import same_mod2, sympy_gens, to_sympy

VS = VarSet(["x", "y", "z", "w"])
GENS = sympy_gens(VS)

exps = st.tuples(*[st.integers(0, 5)] * 4)


@st.composite
def polys(draw, kind="lex"):
    terms = draw(st.dictionaries(exps, st.just(1), max_size=6))
    return MPoly.from_terms(monomial_order(kind, VS), terms)


@settings(max_examples=150)
@given(polys(), polys())
def test_ring_ops_match_sympy(f, g):
    F, G = to_sympy(f, GENS), to_sympy(g, GENS)
    assert same_mod2(to_sympy(f + g, GENS), F + G, GENS)
    assert same_mod2(to_sympy(f * g, GENS), F * G, GENS)
    assert same_mod2(to_sympy(f**3, GENS), F**3, GENS)
    assert same_mod2(to_sympy(f.square(), GENS), F**2, GENS)


@settings(max_examples=100)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f + f == 0
    assert (f + g).square() == f.square() + g.square()


@settings(max_examples=100)
@given(polys())
def test_parse_roundtrip(f):
    assert MPoly.parse(str(f), f.order) == f


@settings(max_examples=100)
@given(polys("grevlex"))
def test_reorder_keeps_polynomial(f):
    assert same_mod2(to_sympy(f.reorder(lex(VS)), GENS), to_sympy(f, GENS), GENS)


@settings(max_examples=200)
@given(exps, exps)
def test_packed_keys_sort_like_sympy(a, b):
    for kind, key in (("lex", sym_lex), ("grevlex", sym_grevlex)):
        o = monomial_order(kind, VS)
        mine = (o.encode(a) > o.encode(b)) - (o.encode(a) < o.encode(b))
        theirs = (key(a) > key(b)) - (key(a) < key(b))
        assert mine == theirs
        assert o.decode(o.encode(a)) == a


@settings(max_examples=100)
@given(exps, exps)
def test_divisibility_and_lcm(a, b):
    o = grevlex(VS)
    assert o.divides(o.encode(a), o.encode(b)) == all(x <= y for x, y in zip(a, b))
    assert o.decode(o.lcm(o.encode(a), o.encode(b))) == tuple(max(x, y) for x, y in zip(a, b))


@settings(max_examples=100)
@given(polys())
def test_derivative_matches_sympy(f):
    for name, g in zip(VS.names, GENS):
        assert same_mod2(to_sympy(formal_derivative(f, name), GENS), to_sympy(f, GENS).diff(g), GENS)


@settings(max_examples=100)
@given(polys(), polys())
def test_substitution_is_composition(f, g):
    h = f.substitute({"x": g})
    X, Y, Z, W = GENS
    want = sympy.Poly(to_sympy(f, GENS).as_expr().subs(X, to_sympy(g, GENS).as_expr()), *GENS, modulus=2)
    assert same_mod2(to_sympy(h, GENS), want, GENS)


@pytest.mark.parametrize("N", range(25))
def test_binom_mod2_matches_pascal(N):
    for k in range(-1, N + 2):
        want = comb(N, k) % 2 if 0 <= k <= N else 0
        assert binom_mod2(N, k) == want


def test_coefficients_over_extension():
    F = field_create(4)
    o = lex(VS)
    f = MPoly.parse("3*x + y", o, F)
    assert str(f * f) == "5*x^2 + y^2"
    assert f.evaluate({"x": F(1), "y": F(3)}) == F.zero
    assert f.sqrt() is None
    assert (f * f).sqrt() == f


def test_printing():
    o = lex(VarSet.for_curve(2))
    p = MPoly.parse("a_1*beta + gamma_2 + alpha^3 + 1", o)
    assert str(p) == "gamma_2 + beta*a_1 + alpha^3 + 1"
    assert str(MPoly.zero(o)) == "0"
    assert p.leading_monomial()[0] == 1


def test_mismatches():
    o1, o2 = lex(VS), lex(VarSet(["x", "y"]))
    with pytest.raises(VarSetMismatch):
        MPoly.var(o1, "x") + MPoly.var(o2, "x")
    with pytest.raises(VarSetMismatch):
        MPoly.var(o1, "q")
    with pytest.raises(FieldMismatch):
        MPoly.parse("3*x", o1, field_create(2)) + MPoly.parse("3*x", o1, field_create(3))
    with pytest.raises(ValueError):
        MPoly.parse("x + + y", o1)
