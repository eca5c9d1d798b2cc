"""Curves y^2 + y = x(x^{2n} + sum a_i x^{2i}), their automorphisms and condition systems.

An automorphism (alpha, beta; gamma_n..gamma_0) acts by
x -> alpha*x + beta, y -> y + sum gamma_i x^i.  It preserves the curve iff

    f(alpha*x + beta) + Gamma(x)^2 + Gamma(x) = f(x)

as polynomials in x, so comparing x^l coefficients for l = 0..2n+1 gives one
condition per l.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass, field

from .errors import (
    FieldMismatch,
    IndexOutOfRange,
    NotAnAutomorphism,
    UnsupportedGenus,
    VarSetMismatch,
)
from .ff2 import Field, FieldElem, field_create
from .mpoly import MonomialOrder, MPoly, VarSet, binom_mod2, lex

# --------------------------------------------------------------------------
# curve specifications


@dataclass(frozen=True)
class CurveSpec:
    """``coeffs[i]`` is a_i: an MPoly in symbolic mode, a FieldElem in concrete mode."""

    n: int
    coeffs: tuple
    field: Field | None = None
    varset: VarSet | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(self.coeffs)}")
        if self.field is not None:
            for c in self.coeffs:
                if not isinstance(c, FieldElem) or c.field is not self.field:
                    raise FieldMismatch("concrete coefficients must all live in the curve's field")

    @property
    def genus(self) -> int:
        return self.n

    @property
    def mode(self) -> str:
        return "symbolic" if self.field is None else "concrete"

    @classmethod
    def symbolic(cls, n: int, varset: VarSet | None = None) -> CurveSpec:
        varset = varset or VarSet.for_curve(n)
        o = lex(varset)
        return cls(n, tuple(MPoly.var(o, f"a_{i}") for i in range(n)), None, varset)

    @classmethod
    def concrete(cls, n: int, coeffs: Mapping | None = None, field: Field | int = 1) -> CurveSpec:
        """Unlisted coefficients are 0; values are FieldElems or integer encodings."""
        if isinstance(field, int):
            field = field_create(field)
        vals = [field.zero] * n
        for key, v in (coeffs or {}).items():
            i = _coeff_index(key)
            if not 0 <= i < n:
                raise IndexOutOfRange(f"a_{i} is not a coefficient for n={n}")
            if isinstance(v, FieldElem):
                if v.field is not field:
                    if v.field.degree == 1:
                        v = field(v.value)
                    else:
                        raise FieldMismatch(f"a_{i} lives in {v.field!r}, curve in {field!r}")
            else:
                v = field(int(v))
            vals[i] = v
        return cls(n, tuple(vals), field)

    @classmethod
    def parse(cls, text: str, field: Field | int = 1) -> CurveSpec:
        """``n=<int>; a_0=<val>, a_1=<val>, ...``; values are field encodings."""
        head, _, rest = text.partition(";")
        m = re.fullmatch(r"\s*n\s*=\s*(\d+)\s*", head)
        if not m:
            raise ValueError(f"cannot parse curve {text!r}")
        n = int(m.group(1))
        return cls.concrete(n, parse_assignments(rest), field)

    def with_field(self, field: Field) -> CurveSpec:
        """Re-encode GF(2) coefficients in a larger field."""
        if self.field is None:
            raise ValueError("symbolic curve has no field")
        if any(c.value > 1 for c in self.coeffs) and field is not self.field:
            raise FieldMismatch("only GF(2) coefficients can be re-encoded across fields")
        return CurveSpec(self.n, tuple(field(c.value) for c in self.coeffs), field)

    def coeff_values(self) -> list[int]:
        return [c.value for c in self.coeffs]

    def f_coeffs(self) -> list:
        """Dense coefficients of f(x), lowest degree first (raw ints in concrete mode)."""
        out = [0] * (2 * self.n + 2)
        out[2 * self.n + 1] = 1
        for i, c in enumerate(self.coeffs):
            out[2 * i + 1] = c.value if isinstance(c, FieldElem) else c
        return out

    def __str__(self) -> str:
        vals = ", ".join(f"a_{i}={c.value if isinstance(c, FieldElem) else c}" for i, c in enumerate(self.coeffs))
        return f"n={self.n}; {vals}"


def _coeff_index(key) -> int:
    if isinstance(key, int):
        return key
    m = re.fullmatch(r"a_(\d+)", str(key).strip())
    if not m:
        raise ValueError(f"bad coefficient name {key!r}")
    return int(m.group(1))


def parse_assignments(text: str) -> dict[str, int]:
    """``a_0=1,a_1=3`` -> {'a_0': 1, 'a_1': 3}; also accepts whitespace separators."""
    out: dict[str, int] = {}
    for item in re.split(r"[,\s]+", text.strip()):
        if not item:
            continue
        name, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"expected name=value, got {item!r}")
        out[name.strip()] = int(val.strip(), 0)
    return out


# --------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True, order=True)
class Automorphism:
    """(alpha, beta; gamma_n, ..., gamma_0) as FieldElems."""

    alpha: FieldElem
    beta: FieldElem
    gammas: tuple = field(default=())

    @classmethod
    def from_ints(cls, F: Field, alpha: int, beta: int, gammas) -> Automorphism:
        return cls(F(alpha), F(beta), tuple(F(g) for g in gammas))

    @classmethod
    def identity(cls, F: Field, n: int) -> Automorphism:
        return cls.from_ints(F, 1, 0, [0] * (n + 1))

    @classmethod
    def involution(cls, F: Field, n: int) -> Automorphism:
        return cls.from_ints(F, 1, 0, [0] * n + [1])

    @property
    def n(self) -> int:
        return len(self.gammas) - 1

    @property
    def field(self) -> Field:
        return self.alpha.field

    def gamma_poly(self) -> list[int]:
        """Gamma(x) dense, lowest degree first."""
        return [g.value for g in reversed(self.gammas)]

    def as_ints(self) -> tuple[int, int, tuple[int, ...]]:
        return self.alpha.value, self.beta.value, tuple(g.value for g in self.gammas)

    def tau(self) -> tuple[int, int]:
        return self.alpha.value, self.beta.value

    def to_json(self) -> dict:
        a, b, gs = self.as_ints()
        return {"alpha": a, "beta": b, "gammas": list(gs)}

    def __str__(self) -> str:
        a, b, gs = self.as_ints()
        return f"({a},{b};{','.join(map(str, gs))})"


# dense univariate helpers over a Field on raw ints, lowest degree first

def _uadd(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return out


def _umul_linear(F: Field, p: list[int], s: int, t: int) -> list[int]:
    """p(x) * (s*x + t)."""
    out = [0] * (len(p) + 1)
    mul = F.mul_raw
    for i, c in enumerate(p):
        if c:
            out[i + 1] ^= mul(c, s)
            out[i] ^= mul(c, t)
    return out


def compose_affine(F: Field, p: list[int], s: int, t: int) -> list[int]:
    """p(s*x + t) by Horner."""
    out: list[int] = []
    for c in reversed(p):
        out = _umul_linear(F, out, s, t)
        if out:
            out[0] ^= c
        else:
            out = [c]
    return out


def _trim(p: list[int]) -> list[int]:
    while p and not p[-1]:
        p.pop()
    return p


def automorphism_defect(F: Field, fco: list[int], alpha: int, beta: int, gamma: list[int]) -> list[int]:
    """f(alpha x + beta) + Gamma^2 + Gamma + f(x) as a dense list (empty iff automorphism)."""
    h = compose_affine(F, fco, alpha, beta)
    h = _uadd(h, fco)
    g2 = [0] * (2 * len(gamma))
    for i, c in enumerate(gamma):
        g2[2 * i] = F.mul_raw(c, c)
    h = _uadd(h, _uadd(g2, gamma))
    return _trim(h)


def is_automorphism(curve: CurveSpec, aut: Automorphism) -> bool:
    if curve.field is None:
        raise ValueError("is_automorphism needs a concrete curve")
    F = curve.field
    for x in (aut.alpha, aut.beta, *aut.gammas):
        if x.field is not F:
            raise FieldMismatch("automorphism and curve live in different fields")
    if aut.n != curve.n:
        return False
    a, b, _ = aut.as_ints()
    if a == 0:
        return False
    return not automorphism_defect(F, curve.f_coeffs(), a, b, aut.gamma_poly())


def _from_gamma_poly(F: Field, alpha: int, beta: int, gamma: list[int], n: int) -> Automorphism:
    gamma = _trim(list(gamma))
    if len(gamma) > n + 1:
        raise NotAnAutomorphism(f"composite offset has degree {len(gamma) - 1} > n={n}")
    gamma = gamma + [0] * (n + 1 - len(gamma))
    return Automorphism.from_ints(F, alpha, beta, list(reversed(gamma)))


def compose(a1: Automorphism, a2: Automorphism, curve: CurveSpec, check: bool = True) -> Automorphism:
    """a1 after a2: tau is (alpha1*alpha2, alpha1*beta2 + beta1)."""
    if check:
        for a in (a1, a2):
            if not is_automorphism(curve, a):
                raise NotAnAutomorphism(f"{a} is not an automorphism of {curve}")
    F = curve.field
    al1, be1, _ = a1.as_ints()
    al2, be2, _ = a2.as_ints()
    gamma = _uadd(a2.gamma_poly(), compose_affine(F, a1.gamma_poly(), al2, be2))
    return _from_gamma_poly(F, F.mul_raw(al1, al2), F.mul_raw(al1, be2) ^ be1, gamma, curve.n)


def inverse(a: Automorphism, curve: CurveSpec) -> Automorphism:
    F = curve.field
    al, be, _ = a.as_ints()
    ai = F.inv_raw(al)
    bi = F.mul_raw(ai, be)
    gamma = compose_affine(F, a.gamma_poly(), ai, bi)
    return _from_gamma_poly(F, ai, bi, gamma, curve.n)


# --------------------------------------------------------------------------
# condition systems


@dataclass(frozen=True)
class ConditionSystem:
    n: int
    varset: VarSet
    generators: tuple  # generators[k] belongs to l = 2n+1-k

    def by_degree(self) -> dict[int, MPoly]:
        top = 2 * self.n + 1
        return {top - k: g for k, g in enumerate(self.generators)}


def c_coeff(n: int, l: int, varset: VarSet | None = None) -> MPoly:
    """x^l coefficient of f(alpha x + beta) + Gamma^2 + Gamma for the generic curve."""
    if not 0 <= l <= 2 * n + 1:
        raise IndexOutOfRange(f"l={l} outside 0..{2 * n + 1}")
    varset = varset or VarSet.for_curve(n)
    o = lex(varset)
    polys = []
    if binom_mod2(2 * n + 1, l):
        polys.append(MPoly.monomial(o, {"alpha": l, "beta": 2 * n + 1 - l}))
    for i in range(l // 2, n):
        if binom_mod2(2 * i + 1, l):
            polys.append(MPoly.monomial(o, {f"a_{i}": 1, "alpha": l, "beta": 2 * i + 1 - l}))
    if l % 2 == 0:
        polys.append(MPoly.monomial(o, {f"gamma_{l // 2}": 2}))
    if l <= n:
        polys.append(MPoly.var(o, f"gamma_{l}"))
    out = MPoly.zero(o)
    for p in polys:
        out = out + p
    return out


def _target(n: int, l: int, o: MonomialOrder) -> MPoly:
    if l == 2 * n + 1:
        return MPoly.one(o)
    if l % 2 == 0:
        return MPoly.zero(o)
    return MPoly.var(o, f"a_{(l - 1) // 2}")


def condition_system(n: int, varset: VarSet | None = None) -> ConditionSystem:
    varset = varset or VarSet.for_curve(n)
    o = lex(varset)
    gens = tuple(c_coeff(n, l, varset) + _target(n, l, o) for l in range(2 * n + 1, -1, -1))
    return ConditionSystem(n, varset, gens)


def condition_system_by_substitution(n: int, varset: VarSet | None = None) -> ConditionSystem:
    """Apply the coordinate change to F = y^2 + y + f(x) and read off the x^l coefficients of F + phi(F)."""
    varset = varset or VarSet.for_curve(n)
    ext = VarSet(varset.names + ("y", "x"), n=n)
    o = lex(ext)
    x, y = MPoly.var(o, "x"), MPoly.var(o, "y")
    fx = x ** (2 * n + 1)
    for i in range(n):
        fx = fx + MPoly.var(o, f"a_{i}") * x ** (2 * i + 1)
    F = y * y + y + fx
    gamma = MPoly.zero(o)
    for i in range(n + 1):
        gamma = gamma + MPoly.var(o, f"gamma_{i}") * x**i
    phi = {"x": MPoly.var(o, "alpha") * x + MPoly.var(o, "beta"), "y": y + gamma}
    H = F + F.substitute(phi)
    parts = H.coefficients_in(["y", "x"])
    base = lex(varset)
    gens = []
    for l in range(2 * n + 1, -1, -1):
        p = parts.pop((0, l), None)
        gens.append(p.change_ring(base) if p is not None else MPoly.zero(base))
    if parts:
        raise VarSetMismatch(f"unexpected y-dependence in F + phi(F): {sorted(parts)}")
    return ConditionSystem(n, varset, tuple(gens))


# --------------------------------------------------------------------------
# Scholten-Zhu catalog

# genus -> (n, {a_index: (parameter, exponent)})
SZ_CATALOG: dict[int, tuple[int, dict[int, tuple[str, int]]]] = {
    1: (1, {}),
    2: (2, {1: ("c_3", 1)}),
    4: (4, {2: ("c_5", 1), 1: ("c_3", 1)}),
    5: (5, {1: ("c_3", 1), 0: ("c_1", 1)}),
    6: (6, {1: ("c_3", 1), 0: ("c_1", 1)}),
    8: (8, {4: ("c_9", 1), 2: ("c_5", 1), 1: ("c_3", 1)}),
    9: (9, {4: ("c", 8), 0: ("c", 3)}),
}

SZ_EQUATIONS = {
    1: "y^2 - y = x^3",
    2: "y^2 - y = x^5 + c_3*x^3",
    3: "none",
    4: "y^2 - y = x^9 + c_5*x^5 + c_3*x^3",
    5: "y^2 - y = x^11 + c_3*x^3 + c_1*x",
    6: "y^2 - y = x^13 + c_3*x^3 + c_1*x",
    7: "none",
    8: "y^2 - y = x^17 + c_9*x^9 + c_5*x^5 + c_3*x^3",
    9: "y^2 - y = x^19 + c^8*x^9 + c^3*x",
}


def sz_parameters(g: int) -> list[str]:
    _, amap = _sz_entry(g)
    return sorted({p for p, _ in amap.values()}, key=lambda s: (len(s), s), reverse=True)


def _sz_entry(g: int):
    if g not in SZ_CATALOG:
        row = SZ_EQUATIONS.get(g)
        if row == "none":
            raise UnsupportedGenus(f"genus {g}: the Scholten-Zhu table lists 'none' for this genus")
        raise UnsupportedGenus(f"genus {g} is not in the Scholten-Zhu table")
    return SZ_CATALOG[g]


def sz_varset(g: int) -> VarSet:
    n, _ = _sz_entry(g)
    return VarSet.for_curve(n, extra=sz_parameters(g))


def sz_substitution(g: int, varset: VarSet | None = None) -> dict[str, MPoly]:
    """Bindings a_i -> parameter power (0 for unlisted a_i) in the SZ VarSet."""
    n, amap = _sz_entry(g)
    varset = varset or sz_varset(g)
    o = lex(varset)
    out = {}
    for i in range(n):
        if i in amap:
            p, e = amap[i]
            out[f"a_{i}"] = MPoly.monomial(o, {p: e})
        else:
            out[f"a_{i}"] = MPoly.zero(o)
    return out


def scholten_zhu(g: int, coeffs: Mapping | None = None, field: Field | int | None = None) -> CurveSpec:
    """The SZ curve of genus g in normal form.

    With ``field`` given, ``coeffs`` maps parameter names (c_3, c_5, c_9, c_1, c)
    to values; missing parameters are 0.  Without a field the result is
    symbolic in the parameters.
    """
    n, amap = _sz_entry(g)
    params = sz_parameters(g)
    coeffs = dict(coeffs or {})
    unknown = set(coeffs) - set(params)
    if unknown:
        raise ValueError(f"genus {g} has parameters {params}, got {sorted(unknown)}")
    if field is None:
        varset = sz_varset(g)
        subs = sz_substitution(g, varset)
        return CurveSpec(n, tuple(subs[f"a_{i}"] for i in range(n)), None, varset)
    if isinstance(field, int):
        field = field_create(field)
    vals = {}
    for i, (p, e) in amap.items():
        v = coeffs.get(p, 0)
        v = v if isinstance(v, FieldElem) else field(int(v))
        if v.field is not field:
            v = field(v.value)
        vals[i] = v**e
    return CurveSpec.concrete(n, vals, field)


def sz_condition_system(g: int) -> ConditionSystem:
    """Condition system of the symbolic SZ curve, in the SZ VarSet."""
    n, _ = _sz_entry(g)
    varset = sz_varset(g)
    subs = sz_substitution(g, varset)
    base = condition_system(n, varset)
    return ConditionSystem(n, varset, tuple(p.substitute(subs) for p in base.generators))


def curve_condition_system(curve: CurveSpec) -> ConditionSystem:
    """Condition system with the curve's coefficients plugged in (concrete or symbolic)."""
    varset = curve.varset or VarSet.for_curve(curve.n)
    base = condition_system(curve.n, varset)
    subs = {f"a_{i}": c for i, c in enumerate(curve.coeffs)}
    if curve.field is None:
        o = lex(varset)
        subs = {k: (v.change_ring(o) if isinstance(v, MPoly) else v) for k, v in subs.items()}
    return ConditionSystem(curve.n, varset, tuple(p.substitute(subs) for p in base.generators))


def evaluate_conditions(curve: CurveSpec, aut: Automorphism) -> list[FieldElem]:
    """Values of every condition generator at (aut, curve); all zero iff automorphism."""
    F = curve.field
    system = condition_system(curve.n)
    point = {"alpha": aut.alpha, "beta": aut.beta}
    for k, gv in enumerate(aut.gammas):
        point[f"gamma_{curve.n - k}"] = gv
    for i, c in enumerate(curve.coeffs):
        point[f"a_{i}"] = c
    out = []
    for g in system.generators:
        v = g.evaluate(point)
        out.append(v if v.field is F else F(v.value))
    return out


@dataclass(frozen=True)
class GammaElimination:
    """The condition system solved for gamma_n..gamma_1.

    ``gamma_defs[l]`` is Q_l with gamma_l = Q_l (no gamma inside), ``gamma0`` is
    the remaining quadratic gamma_0^2 + gamma_0 + P_0 and ``equations`` are the
    l > n conditions with the gammas substituted.  Because the gamma relations
    are linear or monic, ``equations`` generate the elimination ideal in
    beta, alpha and the coefficients.
    """

    n: int
    varset: VarSet
    gamma_defs: dict
    gamma0: MPoly
    equations: tuple


def eliminate_gammas(system: ConditionSystem) -> GammaElimination:
    n = system.n
    gens = system.by_degree()
    o = gens[0].order
    defs: dict[int, MPoly] = {}
    for l in range(1, n + 1):
        rest = gens[l] + MPoly.var(o, f"gamma_{l}")
        if l % 2 == 0:
            rest = rest.substitute({f"gamma_{l // 2}": defs[l // 2]})
        defs[l] = rest
    subs = {f"gamma_{k}": q for k, q in defs.items()}
    eqs = []
    for l in range(2 * n + 1, n, -1):
        e = gens[l].substitute(subs) if l % 2 == 0 else gens[l]
        if e:
            eqs.append(e)
    gnames = [f"gamma_{k}" for k in range(n + 1)]
    for e in eqs + list(defs.values()):
        if e.involves(*gnames):
            raise VarSetMismatch("gamma survived elimination")
    return GammaElimination(n, system.varset, defs, gens[0], tuple(eqs))
