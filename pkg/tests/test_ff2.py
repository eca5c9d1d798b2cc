import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem

from asaut.errors import DegreeOutOfRange, FieldMismatch, ZeroPolynomial
from asaut.ff2 import (
    Field,
    FieldElem,
    artin_schreier_roots,
    field_create,
    is_irreducible,
    mul_array,
    multiplicative_order_of_two,
    roots_of_univariate,
    smallest_irreducible,
    sqrt_array,
    trace,
)


def bits(v: int) -> list[int]:
    return [int(c) for c in bin(v)[2:]]


def unbits(coeffs) -> int:
    return int("".join(str(int(c) % 2) for c in coeffs) or "0", 2)


def sympy_mul(F: Field, a: int, b: int) -> int:
    prod = gf_mul(bits(a), bits(b), 2, ZZ)
    return unbits(gf_rem(prod, bits(F.modulus), 2, ZZ))


degrees = st.integers(min_value=1, max_value=10)


@st.composite
def field_pairs(draw):
    F = field_create(draw(degrees))
    a = draw(st.integers(0, F.order - 1))
    b = draw(st.integers(0, F.order - 1))
    return F, a, b


@pytest.mark.parametrize("m", range(1, 17))
def test_default_modulus_is_irreducible(m):
    poly = smallest_irreducible(m)
    assert poly.bit_length() - 1 == m
    assert gf_irreducible_p(bits(poly), 2, ZZ)


def test_irreducibility_agrees_with_sympy():
    for poly in range(2, 1 << 9):
        assert is_irreducible(poly) == gf_irreducible_p(bits(poly), 2, ZZ), poly


@settings(max_examples=300)
@given(field_pairs())
def test_mul_matches_sympy(case):
    F, a, b = case
    assert F.mul_raw(a, b) == sympy_mul(F, a, b)


@settings(max_examples=200)
@given(field_pairs())
def test_field_axioms(case):
    F, a, b = case
    x, y = F.element(a), F.element(b)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) * (x + y) == x * x + y * y
    assert x + x == F.zero
    if b:
        assert (x / y) * y == x
        assert y * y.inv() == F.one
    assert x.sqrt() ** 2 == x
    assert x ** (F.order - 1) == (F.one if a else F.zero)


@settings(max_examples=100)
@given(field_pairs())
def test_trace_is_additive_and_binary(case):
    F, a, b = case
    x, y = F.element(a), F.element(b)
    assert trace(x + y) == trace(x) ^ trace(y)
    assert trace(x) in (0, 1)


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8])
def test_artin_schreier_roots(m):
    F = field_create(m)
    solvable = 0
    for t in F.elements():
        roots = artin_schreier_roots(t)
        assert all(z * z + z == t for z in roots)
        assert len(roots) == (2 if trace(t) == 0 else 0)
        solvable += bool(roots)
    assert solvable == F.order // 2


@pytest.mark.parametrize("m", [3, 6, 9])
def test_array_kernels(m):
    F = field_create(m)
    xs = np.arange(F.order, dtype=np.int64)
    ys = xs[::-1].copy()
    assert list(mul_array(F, xs, ys)) == [F.mul_raw(int(a), int(b)) for a, b in zip(xs, ys)]
    assert list(sqrt_array(F, xs)) == [F.sqrt_raw(int(a)) for a in xs]


def test_roots_of_unity_counts():
    F = field_create(12)
    for k in (3, 5, 7, 9, 13, 65):
        d = multiplicative_order_of_two(k)
        if 12 % d == 0:
            assert len(F.roots_of_unity(k)) == k
    assert multiplicative_order_of_two(17) == 8
    assert multiplicative_order_of_two(19) == 18


def test_additive_roots_live_in_gf64():
    # beta^16 + beta^8 + beta^2 + beta splits over GF(2^6), not over GF(2^8)
    p = {16: 1, 8: 1, 2: 1, 1: 1}
    assert len(roots_of_univariate(p, field_create(6))) == 16
    assert len(roots_of_univariate(p, field_create(8))) == 4
    assert len(roots_of_univariate(p, field_create(12))) == 16


def test_errors():
    with pytest.raises(DegreeOutOfRange):
        Field(0)
    with pytest.raises(DegreeOutOfRange):
        Field(17)
    with pytest.raises(ValueError):
        Field(4, 0b10101)
    with pytest.raises(ZeroPolynomial):
        roots_of_univariate([0, 0], field_create(2))
    with pytest.raises(FieldMismatch):
        field_create(2).one + field_create(3).gen
    with pytest.raises(ZeroDivisionError):
        field_create(4).zero.inv()
    with pytest.raises(ValueError):
        FieldElem(field_create(2), 4)


@pytest.mark.parametrize("m", range(1, 9))
def test_inverse_and_frobenius_exhaustive(m):
    F = field_create(m)
    squares = set()
    for x in F.elements():
        if x:
            assert x * x.inv() == F.one
        assert (x * x).sqrt() == x
        squares.add((x * x).value)
    assert len(squares) == F.order


def test_small_moduli():
    assert field_create(1).modulus == 0b11
    assert field_create(2).modulus == 0b111
    assert field_create(3).modulus == 0b1011
    F = field_create(3)
    assert F.gen ** 3 == F.gen + F.one
