import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asaut.curve import (
    SZ_CATALOG,
    Automorphism,
    CurveSpec,
    c_coeff,
    compose,
    condition_system,
    condition_system_by_substitution,
    eliminate_gammas,
    evaluate_conditions,
    inverse,
    is_automorphism,
    scholten_zhu,
    sz_condition_system,
)
from asaut.errors import (
    FieldMismatch,
    IndexOutOfRange,
    NotAnAutomorphism,
    UnsupportedGenus,
)
from asaut.ff2 import field_create
from asaut.groebner import groebner_basis
from asaut.mpoly import MPoly, lex
from asaut.oracle import enumerate_automorphisms


@pytest.mark.parametrize("n", range(1, 10))
def test_closed_form_matches_substitution(n):
    closed = condition_system(n)
    direct = condition_system_by_substitution(n)
    assert closed.by_degree() == direct.by_degree()
    if n <= 4:
        o = lex(closed.varset)
        assert groebner_basis(closed.generators, o) == groebner_basis(direct.generators, o)


def test_c_coeff_shape():
    assert str(c_coeff(1, 3)) == "alpha^3"
    assert str(c_coeff(1, 0)) == "gamma_0^2 + gamma_0 + beta^3 + beta*a_0"
    assert str(c_coeff(2, 4)) == "gamma_2^2 + beta*alpha^4"
    with pytest.raises(IndexOutOfRange):
        c_coeff(2, 6)


def test_gamma_elimination_keeps_the_ideal():
    for n in (2, 3):
        s = condition_system(n)
        el = eliminate_gammas(s)
        o = lex(s.varset)
        G = groebner_basis(s.generators, o)
        extra = [MPoly.var(o, f"gamma_{l}") + q for l, q in el.gamma_defs.items()]
        H = groebner_basis(list(el.equations) + extra + [el.gamma0], o)
        assert G == H


@st.composite
def small_curves(draw):
    n = draw(st.integers(1, 3))
    F = field_create(draw(st.sampled_from([2, 4, 6])))
    coeffs = {i: draw(st.integers(0, F.order - 1)) for i in range(n)}
    return CurveSpec.concrete(n, coeffs, F)


@settings(max_examples=25)
@given(small_curves(), st.randoms(use_true_random=False))
def test_group_law_on_enumerated_automorphisms(curve, rnd):
    auts = list(enumerate_automorphisms(curve).automorphisms)
    members = {a.as_ints() for a in auts}
    ident = Automorphism.identity(curve.field, curve.n)
    for _ in range(20):
        a, b, c = rnd.choice(auts), rnd.choice(auts), rnd.choice(auts)
        ab = compose(a, b, curve)
        assert ab.as_ints() in members
        assert ab.tau() == (curve.field.mul_raw(a.alpha.value, b.alpha.value),
                            curve.field.mul_raw(a.alpha.value, b.beta.value) ^ a.beta.value)
        assert compose(ab, c, curve) == compose(a, compose(b, c, curve), curve)
        assert compose(a, inverse(a, curve), curve) == ident
        assert not any(evaluate_conditions(curve, a))


def test_is_automorphism_basics():
    curve = CurveSpec.concrete(1, {}, 2)
    F = curve.field
    assert is_automorphism(curve, Automorphism.identity(F, 1))
    assert is_automorphism(curve, Automorphism.involution(F, 1))
    bad = Automorphism.from_ints(F, 1, 1, [0, 0])
    assert not is_automorphism(curve, bad)
    with pytest.raises(NotAnAutomorphism):
        compose(bad, bad, curve)
    with pytest.raises(FieldMismatch):
        is_automorphism(curve, Automorphism.identity(field_create(3), 1))


def test_curve_parsing():
    c = CurveSpec.parse("n=3; a_0=1, a_2=3", 2)
    assert c.coeff_values() == [1, 0, 3]
    assert str(c) == "n=3; a_0=1, a_1=0, a_2=3"
    with pytest.raises(IndexOutOfRange):
        CurveSpec.concrete(2, {"a_5": 1})
    with pytest.raises(ValueError):
        CurveSpec.parse("genus 3")


def test_scholten_zhu_catalog():
    assert sorted(SZ_CATALOG) == [1, 2, 4, 5, 6, 8, 9]
    c = scholten_zhu(9, {"c": 2}, 2)
    F = c.field
    assert c.coeffs[4] == F(2) ** 8 and c.coeffs[0] == F(2) ** 3
    assert str(scholten_zhu(4).coeffs[2]) == "c_5"
    for g in (3, 7, 10):
        with pytest.raises(UnsupportedGenus):
            scholten_zhu(g)
    s = sz_condition_system(8)
    assert not any(g.involves("a_0", "a_3") for g in s.generators)


def test_random_concrete_points_satisfy_symbolic_system():
    rng = random.Random(7)
    curve = CurveSpec.concrete(2, {}, 4)
    for aut in rng.sample(list(enumerate_automorphisms(curve).automorphisms), 10):
        assert not any(evaluate_conditions(curve, aut))
