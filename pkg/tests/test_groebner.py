import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from asaut.curve import condition_system, eliminate_gammas
from asaut.errors import LimitExceeded
from asaut.groebner import (
    Limits,
    groebner_basis,
    ideal_contains,
    is_groebner_basis,
    normal_form,
    reduce_basis,
)
from asaut.mpoly import MPoly, VarSet, grevlex, lex, monomial_order

from .conftest import same_mod2, sympy_gens, to_sympy

VS = VarSet(["x", "y", "z"])
GENS = sympy_gens(VS)


def sympy_basis(polys, gens, kind):
    exprs = [to_sympy(p, gens).as_expr() for p in polys if p]
    G = sympy.groebner(exprs, *gens, order=kind, modulus=2)
    return [sympy.Poly(g, *gens, modulus=2) for g in G.exprs]


def assert_same_basis(mine, theirs, gens):
    assert len(mine) == len(theirs)
    for a in mine:
        assert any(same_mod2(to_sympy(a, gens), b, gens) for b in theirs), str(a)


@st.composite
def systems(draw, kind):
    o = monomial_order(kind, VS)
    exps = st.tuples(*[st.integers(0, 2)] * 3)
    polys = draw(st.lists(st.dictionaries(exps, st.just(1), min_size=1, max_size=3), min_size=1, max_size=3))
    return [MPoly.from_terms(o, t) for t in polys], o


@settings(max_examples=60)
@given(systems("lex"))
def test_lex_matches_sympy(case):
    polys, o = case
    assert_same_basis(groebner_basis(polys, o), sympy_basis(polys, GENS, "lex"), GENS)


@settings(max_examples=60)
@given(systems("grevlex"))
def test_grevlex_matches_sympy(case):
    polys, o = case
    G = groebner_basis(polys, o)
    assert_same_basis(G, sympy_basis(polys, GENS, "grevlex"), GENS)
    assert is_groebner_basis(G, o)
    for p in polys:
        assert ideal_contains(G, p)


@pytest.mark.parametrize("n", [1, 2])
def test_condition_systems_match_sympy(n):
    s = condition_system(n)
    gens = sympy_gens(s.varset)
    G = groebner_basis(s.generators, lex(s.varset))
    assert_same_basis(G, sympy_basis(s.generators, gens, "lex"), gens)


def _systems_up_to_4():
    for n in range(1, 5):
        s = condition_system(n)
        yield pytest.param(s.generators, lex(s.varset), id=f"n={n}-lex")
        eqs = eliminate_gammas(s).equations
        yield pytest.param(eqs, grevlex(s.varset), id=f"n={n}-eliminated-grevlex")


@pytest.mark.parametrize("gens,order", list(_systems_up_to_4()))
def test_reduced_basis_ignores_generator_order(gens, order):
    ref = groebner_basis(gens, order)
    assert is_groebner_basis(ref, order)
    rng = random.Random(len(gens) * 31 + order.nvars)
    for _ in range(20):
        shuffled = list(gens)
        rng.shuffle(shuffled)
        assert groebner_basis(shuffled, order) == ref


def test_normal_form_and_reduction():
    o = lex(VS)
    G = groebner_basis([MPoly.parse("x^2 + y", o), MPoly.parse("x*y + 1", o)], o)
    assert normal_form(MPoly.parse("x^3 + x*y^2", o), G, o) == normal_form(MPoly.parse("x*y + x*y^2", o), G, o)
    assert reduce_basis(G + [G[0] * MPoly.parse("z", o)], o) == G
    assert groebner_basis([MPoly.parse("x + 1", o), MPoly.parse("x", o)], o) == [MPoly.one(o)]


def test_limits_raise_with_snapshot():
    s = condition_system(3)
    with pytest.raises(LimitExceeded) as info:
        groebner_basis(s.generators, grevlex(s.varset), Limits(max_pairs=5))
    assert info.value.snapshot["pairs_processed"] >= 5
    with pytest.raises(LimitExceeded):
        groebner_basis(s.generators, grevlex(s.varset), Limits(max_seconds=0.01))


def test_limits_from_env_text():
    lim = Limits.from_env("pairs=10, seconds=2.5,basis=7")
    assert (lim.max_pairs, lim.max_seconds, lim.max_basis_size) == (10, 2.5, 7)
    with pytest.raises(ValueError):
        Limits.from_env("bogus=1")
