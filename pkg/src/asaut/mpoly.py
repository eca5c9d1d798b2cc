"""Sparse multivariate polynomials over GF(2) and GF(2^m).

A monomial is stored as a single Python int that packs its exponent vector
in fixed-width fields, laid out so that

* multiplying monomials is adding their keys, and
* comparing monomials in the active order is comparing their keys.

For lex the fields are the exponents in precedence order.  For grevlex the
fields are the partial sums (total degree first, then the degree without the
last variable, ...), which is linear in the exponents and sorts exactly like
grevlex.  Divisibility is tested on a second packing (``epack``) carrying a
guard bit per field.

Text form: ``alpha^3*a_1 + gamma_3 + 1``; ``^1`` may be omitted, the empty
sum prints as ``0`` and terms print in descending order.
"""

from __future__ import annotations

import functools
import re
from collections import Counter
from collections.abc import Iterable, Mapping

from .errors import FieldMismatch, VarSetMismatch, ZeroPolynomial
from .ff2 import Field, FieldElem, field_create

FIELD_BITS = 22
MAX_TOTAL_DEGREE = 1 << 20

GF2 = field_create(1)


class VarSet:
    """An ordered tuple of variable names; position 0 has the highest precedence."""

    __slots__ = ("_index", "n", "names")

    def __init__(self, names: Iterable[str], n: int | None = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.n = n
        self._index = {v: i for i, v in enumerate(self.names)}

    @classmethod
    def for_curve(cls, n: int, extra: Iterable[str] = ()) -> VarSet:
        """gamma_n > ... > gamma_0 > beta > alpha > a_0 > ... > a_{n-1} > extra."""
        names = [f"gamma_{i}" for i in range(n, -1, -1)] + ["beta", "alpha"]
        names += [f"a_{i}" for i in range(n)]
        names += list(extra)
        return cls(names, n=n)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise VarSetMismatch(f"unknown variable {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarSet({', '.join(self.names)})"


class MonomialOrder:
    """lex or grevlex on a VarSet, with the packed-int monomial codec."""

    KINDS = ("lex", "grevlex")

    def __init__(self, kind: str, varset: VarSet):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.varset = varset
        self.nvars = nv = len(varset)
        w = FIELD_BITS
        self.width = w
        self.field_mask = (1 << w) - 1
        self.full_mask = (1 << (w * nv)) - 1
        self.guard = sum(1 << (w * i + w - 1) for i in range(nv))
        self.ones = sum(1 << (w * i) for i in range(nv))

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialOrder) and self.kind == other.kind and self.varset == other.varset

    def __hash__(self) -> int:
        return hash((self.kind, self.varset))

    def __repr__(self) -> str:
        return f"MonomialOrder({self.kind!r}, {self.varset!r})"

    # codec -----------------------------------------------------------------

    def encode(self, exps) -> int:
        if len(exps) != self.nvars:
            raise VarSetMismatch(f"exponent vector of length {len(exps)} for {self.nvars} variables")
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent")
        if sum(exps) > MAX_TOTAL_DEGREE:
            raise OverflowError(f"total degree {sum(exps)} exceeds {MAX_TOTAL_DEGREE}")
        w = self.width
        key = 0
        if self.kind == "lex":
            for e in exps:
                key = (key << w) | e
        else:
            s = 0
            for j, e in enumerate(exps):
                s += e
                key |= s << (w * j)
        return key

    def decode(self, key: int) -> tuple[int, ...]:
        w, m, nv = self.width, self.field_mask, self.nvars
        if self.kind == "lex":
            return tuple((key >> (w * (nv - 1 - i))) & m for i in range(nv))
        prev, out = 0, []
        for j in range(nv):
            s = (key >> (w * j)) & m
            out.append(s - prev)
            prev = s
        return tuple(out)

    def epack(self, key: int) -> int:
        if self.kind == "lex":
            return key
        return key - ((key << self.width) & self.full_mask)

    def divides(self, ka: int, kb: int) -> bool:
        ea, eb = self.epack(ka), self.epack(kb)
        g = self.guard
        return ((eb | g) - ea) & g == g

    def coprime(self, ka: int, kb: int) -> bool:
        g, o = self.guard, self.ones
        ea, eb = self.epack(ka), self.epack(kb)
        return (((ea | g) - o) & ((eb | g) - o) & g) == 0

    def lcm(self, ka: int, kb: int) -> int:
        return self.encode(tuple(max(x, y) for x, y in zip(self.decode(ka), self.decode(kb))))

    def total_degree(self, key: int) -> int:
        if self.kind == "grevlex":
            return key >> (self.width * (self.nvars - 1))
        return sum(self.decode(key))

    def compare(self, ea, eb) -> int:
        """Three-way comparison of exponent vectors."""
        ka, kb = self.encode(ea), self.encode(eb)
        return (ka > kb) - (ka < kb)


@functools.cache
def monomial_order(kind: str, varset: VarSet) -> MonomialOrder:
    return MonomialOrder(kind, varset)


def lex(varset: VarSet) -> MonomialOrder:
    return monomial_order("lex", varset)


def grevlex(varset: VarSet) -> MonomialOrder:
    return monomial_order("grevlex", varset)


def binom_mod2(N: int, k: int) -> int:
    """Parity of binomial(N, k) by Lucas: 1 iff the bits of k are a subset of those of N."""
    if k < 0 or N < 0 or k > N:
        return 0
    return 1 if (k & ~N) == 0 else 0


def _promote(f1: Field, f2: Field) -> Field:
    if f1 is f2:
        return f1
    if f1.degree == 1:
        return f2
    if f2.degree == 1:
        return f1
    raise FieldMismatch(f"{f1!r} vs {f2!r}")


class MPoly:
    """Immutable polynomial; ``_keys`` sorted descending, ``_coeffs`` None over GF(2)."""

    __slots__ = ("_coeffs", "_hash", "_keys", "field", "order")

    def __init__(self, order: MonomialOrder, keys=(), coeffs=None, field: Field = GF2, *, _sorted=False):
        self.order = order
        self.field = field
        if field.degree == 1:
            coeffs = None
        if coeffs is None:
            ks = tuple(keys) if _sorted else tuple(sorted(keys, reverse=True))
            self._keys, self._coeffs = ks, None
        else:
            pairs = [(k, c) for k, c in zip(keys, coeffs) if c]
            if not _sorted:
                pairs.sort(reverse=True)
            self._keys = tuple(k for k, _ in pairs)
            self._coeffs = tuple(c for _, c in pairs)
            if all(c == 1 for c in self._coeffs):
                pass
        self._hash = None

    # constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, order: MonomialOrder, field: Field = GF2) -> MPoly:
        return cls(order, (), field=field, _sorted=True)

    @classmethod
    def one(cls, order: MonomialOrder, field: Field = GF2) -> MPoly:
        return cls.constant(order, 1, field)

    @classmethod
    def constant(cls, order: MonomialOrder, value, field: Field | None = None) -> MPoly:
        if isinstance(value, FieldElem):
            field = value.field if field is None else _promote(field, value.field)
            value = value.value
        field = field or GF2
        if not value:
            return cls.zero(order, field)
        return cls(order, (0,), None if field.degree == 1 else (int(value),), field=field, _sorted=True)

    @classmethod
    def var(cls, order: MonomialOrder, name: str, field: Field = GF2) -> MPoly:
        exps = [0] * order.nvars
        exps[order.varset.index(name)] = 1
        return cls(order, (order.encode(exps),), None, field=field, _sorted=True)

    @classmethod
    def monomial(cls, order: MonomialOrder, powers: Mapping[str, int], field: Field = GF2) -> MPoly:
        exps = [0] * order.nvars
        for name, e in powers.items():
            exps[order.varset.index(name)] += e
        return cls(order, (order.encode(exps),), None, field=field, _sorted=True)

    @classmethod
    def from_terms(cls, order: MonomialOrder, terms: Mapping, field: Field = GF2) -> MPoly:
        """``terms`` maps exponent tuples to coefficients (ints or FieldElems)."""
        acc: dict[int, int] = {}
        for exps, c in terms.items():
            if isinstance(c, FieldElem):
                field = _promote(field, c.field)
                c = c.value
            k = order.encode(tuple(exps))
            acc[k] = acc.get(k, 0) ^ int(c)
        keys = [k for k, c in acc.items() if c]
        return cls(order, keys, [acc[k] for k in keys], field=field)

    @classmethod
    def parse(cls, text: str, order: MonomialOrder, field: Field = GF2) -> MPoly:
        return parse_poly(text, order, field)

    # basic accessors ---------------------------------------------------------

    @property
    def varset(self) -> VarSet:
        return self.order.varset

    def is_zero(self) -> bool:
        return not self._keys

    def __bool__(self) -> bool:
        return bool(self._keys)

    def __len__(self) -> int:
        return len(self._keys)

    def keys(self) -> tuple[int, ...]:
        return self._keys

    def coeff_values(self) -> tuple[int, ...]:
        return self._coeffs if self._coeffs is not None else (1,) * len(self._keys)

    def terms(self):
        """Yield (exponent tuple, FieldElem) in descending order."""
        dec, f = self.order.decode, self.field
        for k, c in zip(self._keys, self.coeff_values()):
            yield dec(k), FieldElem(f, c)

    def monomials(self) -> list[tuple[int, ...]]:
        return [self.order.decode(k) for k in self._keys]

    def leading_monomial(self, order: MonomialOrder | None = None) -> tuple[int, ...]:
        return self.leading_term(order)[0]

    def leading_term(self, order: MonomialOrder | None = None):
        """(exponent tuple, coefficient) of the order-maximal term."""
        if not self._keys:
            raise ZeroPolynomial("zero polynomial has no leading term")
        f = self if order is None or order == self.order else self.reorder(order)
        c = f._coeffs[0] if f._coeffs is not None else 1
        return f.order.decode(f._keys[0]), FieldElem(f.field, c)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.monomials()), default=-1)

    def degree(self, name: str) -> int:
        i = self.varset.index(name)
        return max((m[i] for m in self.monomials()), default=-1)

    def variables(self) -> list[str]:
        used = [False] * self.order.nvars
        for m in self.monomials():
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return [v for v, u in zip(self.varset.names, used) if u]

    def involves(self, *names: str) -> bool:
        idx = [self.varset.index(n) for n in names]
        return any(m[i] for m in self.monomials() for i in idx)

    def constant_coeff(self) -> int:
        if self._keys and self._keys[-1] == 0:
            return self.coeff_values()[-1]
        return 0

    # arithmetic --------------------------------------------------------------

    def _check(self, other: MPoly) -> Field:
        if self.order.varset != other.order.varset:
            raise VarSetMismatch(f"{self.varset!r} vs {other.varset!r}")
        return _promote(self.field, other.field)

    def _lift(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.order != self.order:
                if other.order.varset != self.order.varset:
                    raise VarSetMismatch(f"{self.varset!r} vs {other.varset!r}")
                other = other.reorder(self.order)
            return other
        if isinstance(other, (int, FieldElem)):
            return MPoly.constant(self.order, other, self.field if isinstance(other, int) else None)
        raise TypeError(f"cannot combine MPoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        field = self._check(other)
        if field.degree == 1:
            return MPoly(self.order, set(self._keys).symmetric_difference(other._keys), field=field)
        acc = dict(zip(self._keys, self.coeff_values()))
        for k, c in zip(other._keys, other.coeff_values()):
            acc[k] = acc.get(k, 0) ^ c
        keys = [k for k, c in acc.items() if c]
        return MPoly(self.order, keys, [acc[k] for k in keys], field=field)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        field = self._check(other)
        if not self._keys or not other._keys:
            return MPoly.zero(self.order, field)
        if field.degree == 1:
            cnt = Counter(a + b for a in self._keys for b in other._keys)
            prod = MPoly(self.order, [k for k, c in cnt.items() if c & 1], field=field)
        else:
            mul = field.mul_raw
            acc: dict[int, int] = {}
            for a, ca in zip(self._keys, self.coeff_values()):
                for b, cb in zip(other._keys, other.coeff_values()):
                    k = a + b
                    acc[k] = acc.get(k, 0) ^ mul(ca, cb)
            keys = [k for k, c in acc.items() if c]
            prod = MPoly(self.order, keys, [acc[k] for k in keys], field=field)
        if prod._keys and self.order.total_degree(prod._keys[0]) > MAX_TOTAL_DEGREE and self.order.kind == "grevlex":
            raise OverflowError("total degree overflow")
        return prod

    __rmul__ = __mul__

    def __pow__(self, e: int) -> MPoly:
        if e < 0:
            raise ValueError("negative power")
        result = MPoly.one(self.order, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    def square(self) -> MPoly:
        """Frobenius: squares each term, no cross terms in characteristic 2."""
        if self.field.degree == 1:
            return MPoly(self.order, [2 * k for k in self._keys], field=self.field, _sorted=True)
        f = self.field
        return MPoly(self.order, [2 * k for k in self._keys], [f.mul_raw(c, c) for c in self.coeff_values()],
                     field=f, _sorted=True)

    def mul_monomial(self, key: int) -> MPoly:
        return MPoly(self.order, [k + key for k in self._keys], self._coeffs, field=self.field, _sorted=True)

    def scale(self, c) -> MPoly:
        if isinstance(c, FieldElem):
            field = _promote(self.field, c.field)
            c = c.value
        else:
            field = self.field
        if not c:
            return MPoly.zero(self.order, field)
        if c == 1:
            return MPoly(self.order, self._keys, self._coeffs, field=field, _sorted=True)
        return MPoly(self.order, self._keys, [field.mul_raw(c, v) for v in self.coeff_values()],
                     field=field, _sorted=True)

    # comparison --------------------------------------------------------------

    def _canon(self):
        if self.order.kind == "lex":
            return frozenset(zip(self._keys, self.coeff_values()))
        dec = self.order.decode
        return frozenset((dec(k), c) for k, c in zip(self._keys, self.coeff_values()))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElem)):
            if not other:
                return not self._keys
            return self._keys == (0,) and self.coeff_values()[0] == int(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        if self.varset != other.varset:
            return False
        if self.order == other.order:
            return self._keys == other._keys and self.coeff_values() == other.coeff_values()
        return self._canon() == other._canon() if self.order.kind == other.order.kind else (
            self.reorder(other.order) == other)

    def __hash__(self) -> int:
        if self._hash is None:
            f = self.reorder(lex(self.varset)) if self.order.kind != "lex" else self
            self._hash = hash((self.varset, f._keys, f.coeff_values()))
        return self._hash

    # transformations ---------------------------------------------------------

    def reorder(self, order: MonomialOrder) -> MPoly:
        if order == self.order:
            return self
        if order.varset != self.varset:
            raise VarSetMismatch("reorder requires the same VarSet")
        dec, enc = self.order.decode, order.encode
        return MPoly(order, [enc(dec(k)) for k in self._keys], self._coeffs, field=self.field)

    def change_ring(self, order: MonomialOrder, rename: Mapping[str, str] | None = None) -> MPoly:
        """Re-express in another VarSet; variables map by name (optionally renamed)."""
        rename = dict(rename or {})
        src = self.varset.names
        target = [order.varset.index(rename.get(v, v)) if rename.get(v, v) in order.varset else None for v in src]
        terms: dict[int, int] = {}
        for k, c in zip(self._keys, self.coeff_values()):
            exps = [0] * order.nvars
            for i, e in enumerate(self.order.decode(k)):
                if e:
                    if target[i] is None:
                        raise VarSetMismatch(f"variable {src[i]!r} has no image in {order.varset!r}")
                    exps[target[i]] += e
            nk = order.encode(exps)
            terms[nk] = terms.get(nk, 0) ^ c
        keys = [k for k, c in terms.items() if c]
        return MPoly(order, keys, [terms[k] for k in keys], field=self.field)

    def substitute(self, bindings: Mapping) -> MPoly:
        """Simultaneous substitution of MPolys, FieldElems or 0/1 ints for variables."""
        vs, order = self.varset, self.order
        bound: dict[int, object] = {}
        field = self.field
        for name, val in bindings.items():
            i = vs.index(name) if isinstance(name, str) else int(name)
            if isinstance(val, MPoly):
                if val.varset != vs:
                    raise VarSetMismatch("binding lives in a different VarSet")
                field = _promote(field, val.field)
                val = val.reorder(order)
            elif isinstance(val, FieldElem):
                field = _promote(field, val.field)
            elif isinstance(val, int):
                if val not in (0, 1):
                    raise ValueError("integer bindings must be 0 or 1; use FieldElem for field values")
            else:
                raise TypeError(f"unsupported binding {val!r}")
            bound[i] = val
        if not bound:
            return self
        scalar_only = all(not isinstance(v, MPoly) for v in bound.values())
        dec, enc = order.decode, order.encode
        if scalar_only:
            acc: dict[int, int] = {}
            raw = {i: (v.value if isinstance(v, FieldElem) else v) for i, v in bound.items()}
            for k, c in zip(self._keys, self.coeff_values()):
                exps = list(dec(k))
                coef = c
                for i, v in raw.items():
                    e = exps[i]
                    if e:
                        coef = field.mul_raw(coef, field.pow_raw(v, e))
                        exps[i] = 0
                        if not coef:
                            break
                if coef:
                    nk = enc(exps)
                    acc[nk] = acc.get(nk, 0) ^ coef
            keys = [k for k, c in acc.items() if c]
            return MPoly(order, keys, [acc[k] for k in keys], field=field)

        powers: dict[tuple[int, int], MPoly] = {}

        def power_of(i: int, e: int) -> MPoly:
            key = (i, e)
            if key not in powers:
                v = bound[i]
                base = v if isinstance(v, MPoly) else MPoly.constant(order, v, field)
                powers[key] = base**e
            return powers[key]

        result = MPoly.zero(order, field)
        groups: dict[tuple, list] = {}
        for k, c in zip(self._keys, self.coeff_values()):
            exps = list(dec(k))
            bexp = tuple((i, exps[i]) for i in sorted(bound) if exps[i])
            for i in bound:
                exps[i] = 0
            groups.setdefault(bexp, []).append((enc(exps), c))
        for bexp, rest in groups.items():
            keys = [k for k, _ in rest]
            coeffs = [c for _, c in rest]
            part = MPoly(order, keys, coeffs, field=field)
            for i, e in bexp:
                part = part * power_of(i, e)
            result = result + part
        return result

    def evaluate(self, assignment: Mapping) -> FieldElem:
        """Value at a point assigning every occurring variable."""
        vals: dict[int, int] = {}
        field = self.field
        for name, v in assignment.items():
            i = self.varset.index(name) if isinstance(name, str) else int(name)
            if isinstance(v, FieldElem):
                field = _promote(field, v.field)
                v = v.value
            vals[i] = int(v)
        total = 0
        for k, c in zip(self._keys, self.coeff_values()):
            t = c
            for i, e in enumerate(self.order.decode(k)):
                if e:
                    if i not in vals:
                        raise VarSetMismatch(f"variable {self.varset.names[i]!r} not assigned")
                    t = field.mul_raw(t, field.pow_raw(vals[i], e))
                    if not t:
                        break
            total ^= t
        return FieldElem(field, total)

    def derivative(self, name: str) -> MPoly:
        return formal_derivative(self, name)

    def coefficients_in(self, names: Iterable[str]) -> dict[tuple[int, ...], MPoly]:
        """Split by the exponents of ``names``: {exps over names: coefficient poly}."""
        idx = [self.varset.index(n) for n in names]
        groups: dict[tuple, tuple[list, list]] = {}
        for k, c in zip(self._keys, self.coeff_values()):
            exps = list(self.order.decode(k))
            sel = tuple(exps[i] for i in idx)
            for i in idx:
                exps[i] = 0
            ks, cs = groups.setdefault(sel, ([], []))
            ks.append(self.order.encode(exps))
            cs.append(c)
        return {sel: MPoly(self.order, ks, cs, field=self.field) for sel, (ks, cs) in groups.items()}

    def sqrt(self) -> MPoly | None:
        """The square root when every exponent is even, else None."""
        dec, enc = self.order.decode, self.order.encode
        keys, coeffs = [], []
        for k, c in zip(self._keys, self.coeff_values()):
            exps = dec(k)
            if any(e & 1 for e in exps):
                return None
            keys.append(enc([e // 2 for e in exps]))
            coeffs.append(self.field.sqrt_raw(c))
        return MPoly(self.order, keys, coeffs, field=self.field, _sorted=True)

    # printing ----------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MPoly({format_poly(self)!r})"


def format_poly(f: MPoly) -> str:
    if not f._keys:
        return "0"
    names = f.varset.names
    parts = []
    for k, c in zip(f._keys, f.coeff_values()):
        factors = []
        for name, e in zip(names, f.order.decode(k)):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        if c != 1 or not factors:
            factors.insert(0, str(c))
        parts.append("*".join(factors))
    return " + ".join(parts)


_FACTOR = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*|\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_poly(text: str, order: MonomialOrder, field: Field = GF2) -> MPoly:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    acc: dict[int, int] = {}
    nv = order.nvars
    for term in text.split("+"):
        if not term.strip():
            raise ValueError(f"empty term in {text!r}")
        exps = [0] * nv
        coef = 1
        for factor in term.split("*"):
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor.strip()!r}")
            base, e = m.group(1), int(m.group(2) or 1)
            if base.isdigit():
                v = int(base)
                if v >= field.order:
                    raise ValueError(f"coefficient {v} outside {field!r}")
                coef = field.mul_raw(coef, field.pow_raw(v, e))
            else:
                exps[order.varset.index(base)] += e
        if coef:
            k = order.encode(exps)
            acc[k] = acc.get(k, 0) ^ coef
    keys = [k for k, c in acc.items() if c]
    return MPoly(order, keys, [acc[k] for k in keys], field=field)


def poly_add(f: MPoly, g: MPoly) -> MPoly:
    return f + g


def poly_mul(f: MPoly, g: MPoly) -> MPoly:
    return f * g


def leading_term(f: MPoly, order: MonomialOrder | None = None):
    return f.leading_term(order)


def substitute(f: MPoly, bindings: Mapping) -> MPoly:
    return f.substitute(bindings)


def formal_derivative(f: MPoly, name: str) -> MPoly:
    """d/d(name); a term with even exponent in ``name`` vanishes in characteristic 2."""
    i = f.varset.index(name)
    dec, enc = f.order.decode, f.order.encode
    keys, coeffs = [], []
    for k, c in zip(f._keys, f.coeff_values()):
        exps = list(dec(k))
        if exps[i] & 1:
            exps[i] -= 1
            keys.append(enc(exps))
            coeffs.append(c)
    return MPoly(f.order, keys, coeffs, field=f.field)
