"""Binary finite fields GF(2^m) for 1 <= m <= 16.

Elements are encoded as unsigned integers whose bit i is the coefficient of
g^i, g being the residue of the generator modulo the field polynomial.  This
integer encoding is the one used on the command line and in JSON output.

Multiplication goes through exp/log tables built once per field; the tables
are also exposed as numpy arrays so the enumeration oracle can vectorize
over the whole field.
"""

from __future__ import annotations

import functools
from collections.abc import Iterable, Mapping

import numpy as np

from .errors import DegreeOutOfRange, FieldMismatch, ZeroPolynomial

MAX_DEGREE = 16


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _pmod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2 over GF(2)."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _pmod(poly, q) == 0:
                return False
    return True


def smallest_irreducible(m: int) -> int:
    # smallest integer encoding with nonzero constant term; for m = 1 this
    # picks x + 1 rather than x
    for poly in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible(poly):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _prime_factors(k: int) -> list[int]:
    out, p = [], 2
    while p * p <= k:
        if k % p == 0:
            out.append(p)
            while k % p == 0:
                k //= p
        p += 1
    if k > 1:
        out.append(k)
    return out


class Field:
    """The field GF(2^degree) defined by an irreducible ``modulus``."""

    def __init__(self, degree: int, modulus: int | None = None):
        if not 1 <= degree <= MAX_DEGREE:
            raise DegreeOutOfRange(f"field degree must lie in [1, {MAX_DEGREE}], got {degree}")
        if modulus is None:
            modulus = smallest_irreducible(degree)
        if modulus.bit_length() - 1 != degree or not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#b} is not irreducible of degree {degree}")
        self.degree = degree
        self.modulus = modulus
        self.order = 1 << degree
        q1 = self.order - 1

        gen = self._find_generator()
        exp = [0] * (2 * q1)
        log = [0] * self.order
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = _pmod(_clmul(x, gen), modulus)
        exp[q1:] = exp[:q1]
        self.generator = gen
        self._exp = exp
        self._log = log
        self.exp_table = np.array(exp, dtype=np.int64)
        self.log_table = np.array(log, dtype=np.int64)
        self._as_root = None

    def _find_generator(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        factors = _prime_factors(q1)
        for g in range(2, self.order):
            if all(self._slow_pow(g, q1 // p) != 1 for p in factors):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = _pmod(_clmul(r, a), self.modulus)
            a = _pmod(_clmul(a, a), self.modulus)
            e >>= 1
        return r

    # raw integer arithmetic -------------------------------------------------

    def mul_raw(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv_raw(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def pow_raw(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def sqrt_raw(self, a: int) -> int:
        if a == 0:
            return 0
        # squaring doubles the log; halve it modulo the odd group order
        q1 = self.order - 1
        return self._exp[(self._log[a] * (self.order >> 1)) % q1] if q1 > 1 else a

    # element constructors ---------------------------------------------------

    def __call__(self, value: int) -> FieldElem:
        return FieldElem(self, value)

    def element(self, value: int) -> FieldElem:
        return FieldElem(self, value)

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    @property
    def gen(self) -> FieldElem:
        """Residue class of the polynomial variable (encoding 2, or 1 when m = 1)."""
        return FieldElem(self, _pmod(2, self.modulus))

    def elements(self) -> list[FieldElem]:
        return [FieldElem(self, v) for v in range(self.order)]

    def roots_of_unity(self, k: int) -> list[int]:
        """Encodings of all z with z^k = 1, ascending."""
        q1 = self.order - 1
        return sorted(v for v in range(1, self.order) if (self._log[v] * k) % q1 == 0)

    def as_root_table(self) -> np.ndarray:
        """Table t -> smallest z with z^2 + z = t, or -1 when none exists."""
        if self._as_root is None:
            z = np.arange(self.order, dtype=np.int64)
            t = square_array(self, z) ^ z
            table = np.full(self.order, -1, dtype=np.int64)
            # assign in reverse so the smallest root wins
            table[t[::-1]] = z[::-1]
            self._as_root = table
        return self._as_root

    def __repr__(self) -> str:
        return f"GF(2^{self.degree}; modulus={self.modulus:#b})"

    def __reduce__(self):
        return (field_create, (self.degree,)) if self.modulus == smallest_irreducible(self.degree) else (
            Field, (self.degree, self.modulus))


@functools.cache
def field_create(m: int) -> Field:
    """GF(2^m) with the smallest irreducible modulus; cached so identity compares work."""
    return Field(m)


class FieldElem:
    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        value = int(value)
        if not 0 <= value < field.order:
            raise ValueError(f"encoding {value} out of range for {field!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise FieldMismatch(f"{other.field!r} vs {self.field!r}")
            return other.value
        if isinstance(other, int) and other in (0, 1):
            return other
        raise TypeError(f"cannot combine FieldElem with {type(other).__name__}")

    def __add__(self, other):
        try:
            v = self._coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElem(self.field, self.value ^ v)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        try:
            v = self._coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElem(self.field, self.field.mul_raw(self.value, v))

    __rmul__ = __mul__

    def inv(self) -> FieldElem:
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self.field))
        return FieldElem(self.field, self.field.inv_raw(self.value))

    def __truediv__(self, other):
        try:
            v = self._coerce(other)
        except TypeError:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError("division by zero")
        return FieldElem(self.field, self.field.mul_raw(self.value, self.field.inv_raw(v)))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow_raw(self.value, e))

    def sqrt(self) -> FieldElem:
        return FieldElem(self.field, self.field.sqrt_raw(self.value))

    def trace(self) -> int:
        return trace(self)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other and other in (0, 1)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.degree, self.field.modulus, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"FieldElem({self.value}, GF(2^{self.field.degree}))"

    def __str__(self):
        return str(self.value)


def _check_same(x: FieldElem, y: FieldElem) -> None:
    if x.field is not y.field:
        raise FieldMismatch(f"{x.field!r} vs {y.field!r}")


def add(x: FieldElem, y: FieldElem) -> FieldElem:
    _check_same(x, y)
    return x + y


def mul(x: FieldElem, y: FieldElem) -> FieldElem:
    _check_same(x, y)
    return x * y


def inv(x: FieldElem) -> FieldElem:
    return x.inv()


def power(x: FieldElem, e: int) -> FieldElem:
    if e < 0:
        raise ValueError("only nonnegative exponents are supported")
    return x**e


def sqrt(x: FieldElem) -> FieldElem:
    """The unique square root x^(2^(m-1))."""
    return x.sqrt()


def trace(x: FieldElem) -> int:
    f = x.field
    t, y = 0, x.value
    for _ in range(f.degree):
        t ^= y
        y = f.mul_raw(y, y)
    assert t in (0, 1)
    return t


def artin_schreier_roots(t: FieldElem) -> frozenset[FieldElem]:
    """All z with z^2 + z = t: two roots differing by 1, or none."""
    f = t.field
    z = int(f.as_root_table()[t.value])
    if z < 0:
        return frozenset()
    return frozenset((FieldElem(f, z), FieldElem(f, z ^ 1)))


def square_array(field: Field, x: np.ndarray) -> np.ndarray:
    q1 = field.order - 1
    out = field.exp_table[(field.log_table[x] * 2) % q1] if q1 > 1 else x.copy()
    return np.where(x == 0, 0, out)


def mul_array(field: Field, x: np.ndarray, y) -> np.ndarray:
    """Entrywise product; ``y`` may be an array or a raw scalar."""
    q1 = field.order - 1
    y = np.asarray(y, dtype=np.int64)
    if q1 == 1:
        return x & y
    out = field.exp_table[(field.log_table[x] + field.log_table[y]) % q1]
    return np.where((x == 0) | (y == 0), 0, out)


def sqrt_array(field: Field, x: np.ndarray) -> np.ndarray:
    q1 = field.order - 1
    if q1 == 1:
        return x.copy()
    out = field.exp_table[(field.log_table[x] * (field.order >> 1)) % q1]
    return np.where(x == 0, 0, out)


def _coeff_items(p, field: Field | None):
    if isinstance(p, Mapping):
        items = list(p.items())
    else:
        items = list(enumerate(p))
    out = []
    for e, c in items:
        if isinstance(c, FieldElem):
            if field is None:
                field = c.field
            elif c.field is not field:
                raise FieldMismatch("coefficients from different fields")
            v = c.value
        else:
            v = int(c)
        if v:
            out.append((int(e), v))
    return out, field


def eval_univariate_array(field: Field, coeffs: list[tuple[int, int]], xs: np.ndarray) -> np.ndarray:
    """Evaluate sum c_e x^e at every entry of ``xs`` (raw encodings)."""
    q1 = field.order - 1
    logx = field.log_table[xs]
    acc = np.zeros(xs.shape, dtype=np.int64)
    for e, c in coeffs:
        if e == 0:
            acc ^= c
            continue
        lc = field._log[c]
        term = field.exp_table[(logx * e + lc) % q1] if q1 > 1 else np.full(xs.shape, c)
        acc ^= np.where(xs == 0, 0, term)
    return acc


def roots_of_univariate(p, field: Field | None = None) -> frozenset[FieldElem]:
    """All field elements annihilating ``p``, by evaluation at every element.

    ``p`` is a sequence of coefficients (lowest degree first) or a mapping
    exponent -> coefficient; coefficients are FieldElems or raw encodings.
    """
    items, field = _coeff_items(p, field)
    if field is None:
        raise ValueError("field could not be inferred; pass field=")
    if not items:
        raise ZeroPolynomial("roots of the zero polynomial are undefined")
    xs = np.arange(field.order, dtype=np.int64)
    vals = eval_univariate_array(field, items, xs)
    return frozenset(FieldElem(field, int(v)) for v in np.nonzero(vals == 0)[0])


# dense univariate helpers over GF(2^m); lists are lowest degree first ------


def upoly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_from(p, field: Field) -> list[int]:
    items, _ = _coeff_items(p, field)
    if not items:
        return []
    out = [0] * (max(e for e, _ in items) + 1)
    for e, c in items:
        out[e] ^= c
    return upoly_trim(out)


def upoly_mod(field: Field, a: list[int], b: list[int]) -> list[int]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv_lead = field.inv_raw(b[-1])
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = field.mul_raw(a[-1], inv_lead)
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            if bc:
                a[shift + i] ^= field.mul_raw(c, bc)
        upoly_trim(a)
    return a


def upoly_gcd(field: Field, a: list[int], b: list[int]) -> list[int]:
    """Monic gcd; gcd(0, 0) = 0."""
    a, b = upoly_trim(list(a)), upoly_trim(list(b))
    while b:
        a, b = b, upoly_mod(field, a, b)
    if not a:
        return a
    inv_lead = field.inv_raw(a[-1])
    return [field.mul_raw(c, inv_lead) for c in a]


def upoly_derivative(a: list[int]) -> list[int]:
    return upoly_trim([c if i % 2 == 1 else 0 for i, c in enumerate(a)][1:])


def multiplicative_order_of_two(k: int) -> int:
    """Smallest m with 2^m = 1 mod k, i.e. the degree of the field holding the k-th roots of unity."""
    if k == 1:
        return 1
    m, x = 1, 2 % k
    while x != 1:
        x = (x * 2) % k
        m += 1
    return m


def as_elements(field: Field, values: Iterable[int]) -> list[FieldElem]:
    return [FieldElem(field, v) for v in values]
