"""Symbolic classification of the automorphism groups.

Pipeline for a family of curves (generic n, or a Scholten-Zhu genus):

1. Groebner basis of the condition ideal, read off constraints
   ``cofactor * (alpha^d + 1)``; the image of alpha has order
   r = gcd(2n+1, d over the constraints whose cofactor does not vanish).
2. Groebner basis with alpha = 1 added; its beta-only elements cut out the
   unipotent part U = Z_2^l.
3. Both are turned into strata: conjunctions of clauses over the literals
   ``p = 0`` / ``p != 0`` in the coefficients, one stratum per (r, l).

Condition systems are solved for gamma_n..gamma_1 before Buchberger runs
(see ``curve.eliminate_gammas``); under lex the full reduced basis is then
reassembled, so the result is the same basis a direct run would produce.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from importlib import resources

from .curve import (
    SZ_CATALOG,
    CurveSpec,
    condition_system,
    eliminate_gammas,
    sz_condition_system,
    sz_parameters,
    sz_varset,
)
from .errors import (
    PatternMiss,
    SquarefreenessUnknown,
    StructureViolation,
    UnsupportedGenus,
    VarSetMismatch,
)
from .ff2 import Field, FieldElem, field_create, upoly_derivative, upoly_gcd, upoly_trim
from .groebner import Limits, groebner_basis, normal_form
from .mpoly import MPoly, VarSet, lex, monomial_order

STAGED_N = (6,)


# --------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class Family:
    """Generic curves of a given n, or the Scholten-Zhu curves of genus ``sz``."""

    n: int
    sz: int | None = None

    @property
    def varset(self) -> VarSet:
        return sz_varset(self.sz) if self.sz else VarSet.for_curve(self.n)

    @property
    def params(self) -> list[str]:
        return sz_parameters(self.sz) if self.sz else [f"a_{i}" for i in range(self.n)]

    @property
    def label(self) -> str:
        return f"g={self.sz}" if self.sz else f"n={self.n}"

    def system(self):
        return sz_condition_system(self.sz) if self.sz else condition_system(self.n)


def generic_family(n: int) -> Family:
    if n < 1:
        raise ValueError("n must be positive")
    return Family(n)


def sz_family(g: int) -> Family:
    if g not in SZ_CATALOG:
        sz_varset(g)  # raises UnsupportedGenus with the right message
        raise UnsupportedGenus(str(g))  # pragma: no cover
    return Family(SZ_CATALOG[g][0], g)


def _family(x) -> Family:
    return x if isinstance(x, Family) else generic_family(int(x))


# --------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class GroebnerBasis:
    elements: tuple
    order: object
    reduced: bool = True
    eliminated: bool = False  # True: basis of the gamma-free elimination ideal only
    stats: dict = field(default_factory=dict, compare=False)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def strings(self) -> list[str]:
        return [str(g) for g in self.elements]


def _apply_presets(family: Family, presets) -> tuple:
    system = family.system()
    if not presets:
        return system, {}
    allowed = set(family.params)
    subs = {}
    for name, v in presets.items():
        if name not in allowed:
            raise VarSetMismatch(f"presets may only fix coefficients {sorted(allowed)}, got {name!r}")
        if isinstance(v, FieldElem):
            if v.field.degree != 1:
                raise ValueError("symbolic presets must be 0 or 1")
            v = v.value
        if v not in (0, 1):
            raise ValueError("symbolic presets must be 0 or 1")
        subs[name] = int(v)
    gens = tuple(g.substitute(subs) for g in system.generators)
    return type(system)(system.n, system.varset, gens), subs


def automorphism_ideal(family, order: str = "lex", presets=None, *, unipotent: bool = False,
                       method: str = "eliminate", limits: Limits | None = None, progress=None) -> GroebnerBasis:
    """Reduced Groebner basis of the automorphism conditions (plus alpha+1 when ``unipotent``)."""
    family = _family(family)
    system, _ = _apply_presets(family, presets)
    o = monomial_order(order, system.varset)
    one_alpha = MPoly.parse("alpha + 1", lex(system.varset))
    stats: dict = {}
    if method == "direct":
        gens = list(system.generators) + ([one_alpha] if unipotent else [])
        G = groebner_basis(gens, o, limits, stats=stats, progress=progress)
        return GroebnerBasis(tuple(G), o, True, False, stats)
    if method != "eliminate":
        raise ValueError(f"unknown method {method!r}")
    el = eliminate_gammas(system)
    eqs = list(el.equations) + ([one_alpha] if unipotent else [])
    GE = groebner_basis(eqs, o, limits, stats=stats, progress=progress)
    if order != "lex":
        return GroebnerBasis(tuple(GE), o, True, True, stats)
    n = system.n
    full = []
    for l in range(n, 0, -1):
        full.append(MPoly.var(o, f"gamma_{l}") + normal_form(el.gamma_defs[l], GE, o))
    g0 = el.gamma0.reorder(o)
    gq = MPoly.parse("gamma_0^2 + gamma_0", o)
    full.append(gq + normal_form(g0 + gq, GE, o))
    full.extend(GE)
    if GE and GE[0] == 1:
        full = list(GE)
    return GroebnerBasis(tuple(full), o, True, False, stats)


def unipotent_ideal(family, presets=None, order: str = "lex", **kw) -> GroebnerBasis:
    return automorphism_ideal(family, order, presets, unipotent=True, **kw)


# --------------------------------------------------------------------------
# extraction


@dataclass(frozen=True)
class AlphaConstraint:
    """cofactor * (alpha^d + 1) = 0 with the cofactor in the coefficients only."""

    cofactor: MPoly
    d: int

    def to_json(self) -> dict:
        return {"cofactor": str(self.cofactor), "d": self.d}


def _uses(g: MPoly, prefix: str) -> bool:
    return any(v.startswith(prefix) for v in g.variables())


def extract_alpha_constraints(G, n: int) -> tuple[list[AlphaConstraint], MPoly]:
    """Constraints read from elements with alpha but no beta or gamma, plus the root relation."""
    elements = list(G)
    o = elements[0].order
    root = MPoly.monomial(o, {"alpha": 2 * n + 1}) + 1
    out: list[AlphaConstraint] = []
    misses = []
    for g in elements:
        if _uses(g, "gamma_") or _uses(g, "beta"):
            continue
        if not _uses(g, "alpha"):
            misses.append(g)
            continue
        if g == root:
            continue
        parts = g.coefficients_in(["alpha"])
        if len(parts) == 2 and (0,) in parts:
            (d,) = max(parts)
            if parts[(0,)] == parts[(d,)]:
                out.append(AlphaConstraint(parts[(0,)], d))
                continue
        misses.append(g)
    if misses:
        raise PatternMiss("alpha elements outside the cofactor*(alpha^d+1) pattern", misses)
    return out, root


def extract_beta_polynomial(Gu) -> list[MPoly]:
    """Elements of the unipotent basis involving beta and no alpha or gamma."""
    out = []
    misses = []
    for g in Gu:
        if _uses(g, "gamma_"):
            continue
        if _uses(g, "beta") and not _uses(g, "alpha"):
            out.append(g)
        elif not _uses(g, "alpha") and not _uses(g, "beta"):
            misses.append(g)
    if misses:
        raise PatternMiss("coefficient-only relations in the unipotent ideal", misses)
    if not out:
        raise PatternMiss("no beta relation found", list(Gu))
    return out


def _beta_shape(rel: MPoly) -> dict[int, MPoly]:
    return {e[0]: c for e, c in rel.coefficients_in(["beta"]).items()}


def split_beta_data(beta_data) -> tuple[list[MPoly], MPoly | None]:
    """(cofactors of the relations cof*beta, the remaining monic additive relation or None)."""
    linear, nonlinear = [], []
    for rel in beta_data:
        shape = _beta_shape(rel)
        if set(shape) == {1}:
            linear.append(shape[1])
        else:
            nonlinear.append(rel)
    if len(nonlinear) > 1:
        raise PatternMiss("more than one non-linear beta relation", nonlinear)
    M = nonlinear[0] if nonlinear else None
    if M is not None:
        shape = _beta_shape(M)
        top = max(shape)
        if 0 in shape or any(e & (e - 1) for e in shape) or shape[top] != 1:
            raise PatternMiss("beta relation is not a monic additive polynomial", [M])
    return linear, M


def squarefree_certificate(M: MPoly) -> bool:
    """d/dbeta M is the constant 1, so M has no repeated root."""
    return M.derivative("beta") == 1


# --------------------------------------------------------------------------
# strata in conjunctive normal form


@dataclass(frozen=True)
class Literal:
    poly: MPoly
    zero: bool  # True: poly = 0, False: poly != 0

    def __str__(self) -> str:
        return f"{self.poly} {'=' if self.zero else '!='} 0"

    def negate(self) -> Literal:
        return Literal(self.poly, not self.zero)

    def value(self):
        """True/False when the polynomial is constant, else None."""
        if self.poly.is_zero():
            return self.zero
        if self.poly == 1:
            return not self.zero
        return None


def normalize_poly(p: MPoly) -> MPoly:
    """A power of a single variable vanishes iff the variable does; print just the variable."""
    if len(p) == 1:
        vs = p.variables()
        if len(vs) == 1:
            return MPoly.var(p.order, vs[0], p.field)
    return p


def lit(p: MPoly, zero: bool) -> Literal:
    return Literal(normalize_poly(p), zero)


Clause = frozenset


def _sort_key_clause(c):
    return (len(c), sorted((not l.zero, str(l)) for l in c))


def simplify(clauses) -> list[frozenset] | None:
    """Unit propagation plus subsumption; None signals a contradiction."""
    clauses = [frozenset(c) for c in clauses]
    changed = True
    while changed:
        changed = False
        new = []
        for c in clauses:
            kept = set()
            sat = False
            for l in c:
                v = l.value()
                if v is True:
                    sat = True
                    break
                if v is False:
                    continue
                kept.add(l)
            if sat:
                changed = changed or True
                continue
            if not kept:
                return None
            if len(kept) != len(c):
                changed = True
            new.append(frozenset(kept))
        clauses = list(dict.fromkeys(new))
        units = [next(iter(c)) for c in clauses if len(c) == 1]
        var_zero = {}
        for u in units:
            if u.zero and len(u.poly) == 1 and u.poly.total_degree() == 1:
                var_zero[u.poly.variables()[0]] = 0
        unit_set = set(units)
        out = []
        for c in clauses:
            if len(c) == 1 and next(iter(c)) in unit_set:
                out.append(c)
                continue
            lits = set()
            sat = False
            for l in c:
                if l in unit_set:
                    sat = True
                    break
                if l.negate() in unit_set:
                    changed = True
                    continue
                if var_zero and set(l.poly.variables()) & set(var_zero):
                    l = lit(l.poly.substitute(var_zero), l.zero)
                    changed = True
                lits.add(l)
            if sat:
                changed = True
                continue
            out.append(frozenset(lits))
        # units themselves can be rewritten by other variable units
        final = []
        for c in out:
            if len(c) == 1:
                (l,) = c
                others = {k: 0 for k in var_zero if not (l.zero and l.poly == MPoly.var(l.poly.order, k))}
                if others and set(l.poly.variables()) & set(others):
                    c = frozenset({lit(l.poly.substitute(others), l.zero)})
                    changed = True
            final.append(c)
        clauses = final
    # subsumption
    clauses = sorted(set(clauses), key=_sort_key_clause)
    result = []
    for c in clauses:
        if any(d <= c for d in result):
            continue
        result.append(c)
    return result


def ra_string(ell: int, r: int) -> str:
    if ell == 0:
        return f"Z_{r}"
    z2 = "Z_2" if ell == 1 else f"Z_2^{ell}"
    return z2 if r == 1 else f"{z2} x| Z_{r}"


def _divisors(N: int) -> list[int]:
    return [d for d in range(1, N + 1) if N % d == 0]


def _prime_factors(N: int) -> list[int]:
    return [p for p in range(2, N + 1) if N % p == 0 and all(p % q for q in range(2, int(p**0.5) + 1))]


def alpha_strata(constraints, n: int) -> list[tuple[int, list]]:
    N = 2 * n + 1
    out = []
    for r in reversed(_divisors(N)):
        clauses = [frozenset({lit(c.cofactor, True)}) for c in constraints if c.d % r]
        impossible = False
        for p in _prime_factors(N // r):
            clause = frozenset(lit(c.cofactor, False) for c in constraints if c.d % (r * p))
            if not clause:
                impossible = True
                break
            clauses.append(clause)
        if impossible:
            continue
        s = simplify(clauses)
        if s is not None:
            out.append((r, s))
    return out


def beta_strata(beta_data) -> list[tuple[int, list]]:
    linear, M = split_beta_data(beta_data)
    any_linear = frozenset(lit(c, False) for c in linear)
    all_linear_zero = [frozenset({lit(c, True)}) for c in linear]
    out = []
    if M is None:
        s = simplify([any_linear]) if linear else None
        if s is not None:
            out.append((0, s))
        if simplify(all_linear_zero) is not None:
            raise PatternMiss("beta is unconstrained when every linear cofactor vanishes", list(beta_data))
        return out
    shape = _beta_shape(M)
    deg = max(shape)
    b1 = shape.get(1)
    if b1 is not None and b1 == 1:
        if linear:
            s = simplify([any_linear])
            if s is not None:
                out.append((0, s))
        s = simplify(all_linear_zero)
        if s is not None:
            out.append((deg.bit_length() - 1, s))
        return out
    if deg == 2 and b1 is not None:
        s0 = simplify([any_linear | {lit(b1, True)}])
        if s0 is not None:
            out.append((0, s0))
        s1 = simplify(all_linear_zero + [frozenset({lit(b1, False)})])
        if s1 is not None:
            out.append((1, s1))
        return out
    raise PatternMiss("beta relation with a non-constant linear coefficient and degree > 2", [M])


@dataclass
class Stratum:
    clauses: list
    r: int
    ell: int

    @property
    def ra(self) -> str:
        return ra_string(self.ell, self.r)

    @property
    def aut_order(self) -> int:
        return 2 ** (self.ell + 1) * self.r

    @property
    def alias(self) -> str | None:
        return "A_4" if (self.ell, self.r) == (2, 3) else None

    def condition_strings(self) -> list[list[str]]:
        return [[str(l) for l in sorted(c, key=lambda l: (not l.zero, str(l)))]
                for c in sorted(self.clauses, key=_sort_key_clause)]

    def describe(self) -> str:
        if not self.clauses:
            return "always"
        parts = []
        for c in self.condition_strings():
            parts.append(c[0] if len(c) == 1 else "(" + " or ".join(c) + ")")
        return " and ".join(parts)

    def holds(self, values: dict) -> bool:
        return all(any(_literal_holds(l, values) for l in c) for c in self.clauses)

    def to_json(self) -> dict:
        d = {"conditions": self.condition_strings(), "ra": self.ra, "r": self.r, "l": self.ell,
             "aut_order": self.aut_order}
        if self.alias:
            d["alias"] = self.alias
        return d


def _literal_holds(l: Literal, values: dict) -> bool:
    v = l.poly.evaluate(values)
    return (not v) == l.zero


def combine_strata(alpha, beta) -> list[Stratum]:
    out = []
    for r, ac in alpha:
        for ell, bc in beta:
            s = simplify(list(ac) + list(bc))
            if s is not None:
                out.append(Stratum(s, r, ell))
    out.sort(key=lambda s: (s.aut_order, s.describe()))
    return out


# --------------------------------------------------------------------------
# the pipeline


@dataclass
class FamilyAnalysis:
    family: Family
    order: str
    presets: dict
    alpha_constraints: list
    root: MPoly
    beta_data: list
    strata: list
    stages: list
    basis: GroebnerBasis
    unipotent: GroebnerBasis

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def heuristic(self) -> bool:
        return self.family.sz is None and self.family.n > 6

    def t_candidates(self) -> list[MPoly]:
        linear, _ = split_beta_data(self.beta_data)
        return linear

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "family": self.family.label,
            "order": self.order,
            "presets": dict(self.presets),
            "stages": self.stages,
            "alpha_constraints": [c.to_json() for c in self.alpha_constraints],
            "alpha_root": str(self.root),
            "beta_data": [str(b) for b in self.beta_data],
            "squarefree_certificates": {str(b): squarefree_certificate(b) for b in self.beta_data
                                        if set(_beta_shape(b)) != {1}},
            "strata": [s.to_json() for s in self.strata],
            "heuristic": self.heuristic,
        }


def _monomial_variable(p: MPoly) -> str | None:
    q = normalize_poly(p)
    if len(q) == 1 and q.total_degree() == 1:
        return q.variables()[0]
    return None


def analyze(family, order: str | None = None, presets=None, *, staged: bool | None = None,
            method: str = "eliminate", limits: Limits | None = None, progress=None) -> FamilyAnalysis:
    """Run the symbolic pipeline for one family and assemble its strata."""
    family = _family(family)
    presets = dict(presets or {})
    if staged is None:
        staged = family.sz is None and family.n in STAGED_N and order is None and not presets
    order = order or ("grevlex" if staged else "lex")
    kw = dict(method=method, limits=limits, progress=progress)
    n = family.n
    stages = []
    G = automorphism_ideal(family, order, presets, **kw)
    constraints, root = extract_alpha_constraints(G, n)
    stages.append({"order": order, "presets": dict(presets), "basis_size": len(G),
                   "alpha_constraints": [c.to_json() for c in constraints]})
    if staged:
        fixed = {}
        first = []
        for c in constraints:
            v = _monomial_variable(c.cofactor)
            if v is not None:
                fixed[v] = 0
                first.append(c)
        if fixed:
            p2 = dict(presets, **fixed)
            G2 = automorphism_ideal(family, "lex", p2, **kw)
            more, _ = extract_alpha_constraints(G2, n)
            stages.append({"order": "lex", "presets": p2, "basis_size": len(G2),
                           "alpha_constraints": [c.to_json() for c in more]})
            constraints = first + [c for c in more if c not in first]
    Gu = unipotent_ideal(family, presets, "lex", **kw)
    beta_data = extract_beta_polynomial(Gu)
    strata = combine_strata(alpha_strata(constraints, n), beta_strata(beta_data))
    # presets are facts, so fold them into every stratum
    if presets:
        units = []
        for k, v in presets.items():
            p = MPoly.var(lex(family.varset), k) + v
            units.append(frozenset({lit(p, True)}))
        kept = []
        for s in strata:
            c = simplify(list(s.clauses) + units)
            if c is not None:
                kept.append(Stratum([x for x in c if x not in units], s.r, s.ell))
        strata = kept
    for s in strata:
        if (2 * n + 1) % s.r:
            raise StructureViolation(f"r={s.r} does not divide {2 * n + 1}")
    return FamilyAnalysis(family, order, presets, constraints, root, beta_data, strata, stages, G, Gu)


@functools.lru_cache(maxsize=32)
def cached_analysis(family: Family) -> FamilyAnalysis:
    return analyze(family)


# --------------------------------------------------------------------------
# concrete classification


@dataclass
class GroupReport:
    n: int
    r: int
    ell: int
    stratum_conditions: list = field(default_factory=list)
    heuristic: bool = False
    source: str = "analyzer"
    stratum: str | None = None

    def __post_init__(self):
        if self.r < 1 or (2 * self.n + 1) % self.r:
            raise StructureViolation(f"r={self.r} does not divide {2 * self.n + 1}")
        if self.ell < 0:
            raise StructureViolation("negative l")

    @property
    def ra_structure(self) -> str:
        return ra_string(self.ell, self.r)

    @property
    def aut_order(self) -> int:
        return 2 ** (self.ell + 1) * self.r

    @property
    def alias(self) -> str | None:
        return "A_4" if (self.ell, self.r) == (2, 3) else None

    def to_json(self) -> dict:
        d = {"n": self.n, "r": self.r, "l": self.ell, "ra": self.ra_structure, "aut_order": self.aut_order,
             "stratum_conditions": [{"poly": p, "vanishes": z} for p, z in self.stratum_conditions],
             "heuristic": self.heuristic, "source": self.source}
        if self.stratum is not None:
            d["stratum"] = self.stratum
        if self.alias:
            d["alias"] = self.alias
        return d


def _specialize_beta(rel: MPoly, values: dict, F: Field) -> list[int]:
    out: dict[int, int] = {}
    for e, c in rel.coefficients_in(["beta"]).items():
        v = c.evaluate(values) if c.variables() else FieldElem(c.field, c.constant_coeff())
        val = v.value if v.field is F else F(v.value).value
        if val:
            out[e[0]] = val
    dense = [0] * (max(out) + 1 if out else 0)
    for e, c in out.items():
        dense[e] = c
    return dense


def classify_values(analysis: FamilyAnalysis, values: dict, F: Field) -> GroupReport:
    """GroupReport for the coefficient point ``values`` (parameter name -> FieldElem)."""
    n = analysis.n
    vals = {k: (v if isinstance(v, FieldElem) else F(int(v))) for k, v in values.items()}
    for p in analysis.family.params:
        vals.setdefault(p, F.zero)
    ds = [c.d for c in analysis.alpha_constraints if c.cofactor.evaluate(vals)]
    r = math.gcd(2 * n + 1, *ds) if ds else 2 * n + 1
    g: list[int] = []
    for rel in analysis.beta_data:
        g = upoly_gcd(F, g, _specialize_beta(rel, vals, F)) if g else upoly_trim(_specialize_beta(rel, vals, F))
        if not g:
            continue
    if not g:
        raise PatternMiss("every beta relation vanished after specialization", analysis.beta_data)
    deg = len(g) - 1
    dg = upoly_trim(upoly_derivative(g))
    if not dg:
        raise SquarefreenessUnknown(f"specialized beta polynomial of degree {deg} has zero derivative")
    if len(upoly_gcd(F, g, dg)) != 1:
        raise SquarefreenessUnknown("specialized beta polynomial has a repeated root")
    if deg & (deg - 1):
        raise PatternMiss(f"specialized beta data has {deg} roots, not a power of two", analysis.beta_data)
    ell = deg.bit_length() - 1
    polys: dict[str, bool] = {}
    for s in analysis.strata:
        for c in s.clauses:
            for l in c:
                polys[str(l.poly)] = not l.poly.evaluate(vals)
    matched = [s for s in analysis.strata if s.holds(vals)]
    label = matched[0].describe() if len(matched) == 1 else None
    if len(matched) == 1 and (matched[0].r, matched[0].ell) != (r, ell):
        raise StructureViolation(f"stratum predicts {matched[0].ra}, specialization gives {ra_string(ell, r)}")
    return GroupReport(n, r, ell, sorted(polys.items()), analysis.heuristic, "analyzer", label)


def classify(curve: CurveSpec, analysis: FamilyAnalysis | None = None) -> GroupReport:
    """Classify a concrete curve of the generic family for its n."""
    if curve.field is None:
        raise ValueError("classify needs concrete coefficients")
    analysis = analysis or cached_analysis(generic_family(curve.n))
    values = {f"a_{i}": c for i, c in enumerate(curve.coeffs)}
    return classify_values(analysis, values, curve.field)


def classify_sz(g: int, coeffs: dict, field: Field | int = 1) -> GroupReport:
    F = field_create(field) if isinstance(field, int) else field
    analysis = cached_analysis(sz_family(g))
    values = {k: (v if isinstance(v, FieldElem) else F(int(v))) for k, v in coeffs.items()}
    unknown = set(values) - set(analysis.family.params)
    if unknown:
        raise ValueError(f"genus {g} has parameters {analysis.family.params}, got {sorted(unknown)}")
    return classify_values(analysis, values, F)


# --------------------------------------------------------------------------
# tables and golden data


def _data(name: str) -> dict:
    return json.loads(resources.files("asaut").joinpath("data").joinpath(name).read_text())


def t_polynomial() -> MPoly:
    text = _data("golden.json")["t_polynomial"]
    return MPoly.parse(text, lex(VarSet.for_curve(6)))


def golden_table(which: int) -> list[dict]:
    return _data("golden.json")[f"table{which}"]


def _parse_literal(text: str, varset: VarSet) -> Literal:
    text = text.strip()
    if text.endswith("!= 0"):
        return lit(MPoly.parse(text[:-4], lex(varset)), False)
    if text.endswith("= 0"):
        return lit(MPoly.parse(text[:-3], lex(varset)), True)
    raise ValueError(f"bad literal {text!r}")


def _cnf_key(clauses) -> frozenset:
    return frozenset(frozenset((l.poly.reorder(lex(l.poly.varset)), l.zero) for l in c) for c in clauses)


def table_families(which: int) -> list[Family]:
    if which == 2:
        return [generic_family(n) for n in range(1, 7)]
    if which == 3:
        return [sz_family(g) for g in sorted(SZ_CATALOG)]
    raise ValueError("which must be 2 or 3")


def theorem_table(which: int, limits: Limits | None = None, progress=None) -> list[dict]:
    """Run the pipeline for every row; rows that hit a limit carry an ``error`` entry."""
    from .errors import LimitExceeded

    rows = []
    for fam in table_families(which):
        row = {"key": fam.label, "n": fam.n}
        if fam.sz:
            row["g"] = fam.sz
        try:
            a = analyze(fam, limits=limits, progress=progress) if limits or progress else cached_analysis(fam)
            row["strata"] = [s.to_json() for s in a.strata]
            row["analysis"] = a
        except LimitExceeded as exc:
            row["error"] = {"kind": "LimitExceeded", "message": str(exc), "snapshot": exc.snapshot}
        rows.append(row)
    return rows


def compare_with_golden(rows: list[dict], which: int) -> list[str]:
    """Mismatch messages (empty when every cell agrees)."""
    golden = {row["key"]: row for row in golden_table(which)}
    problems = []
    for row in rows:
        gold = golden.get(row["key"])
        if gold is None:
            problems.append(f"{row['key']}: no golden row")
            continue
        if "error" in row:
            problems.append(f"{row['key']}: {row['error']['kind']}")
            continue
        fam = row["analysis"].family
        vs = fam.varset
        want = {}
        for cell in gold["strata"]:
            cnf = [[_parse_literal(t, vs) for t in clause] for clause in cell["conditions"]]
            want[(cell["ra"], cell["aut_order"], _cnf_key(cnf))] = cell["cell"]
        got = {}
        for s in row["analysis"].strata:
            got[(s.ra, s.aut_order, _cnf_key(s.clauses))] = s
        for key, cell in want.items():
            if key not in got:
                problems.append(f"{row['key']}: missing stratum {cell} ({key[0]}, #Aut={key[1]})")
        for key, s in got.items():
            if key not in want:
                problems.append(f"{row['key']}: unexpected stratum {s.ra} #Aut={s.aut_order} if {s.describe()}")
    keys = {row["key"] for row in rows}
    for k in golden:
        if k not in keys:
            problems.append(f"{k}: row not computed")
    return problems


# --------------------------------------------------------------------------
# n = 2^m experiment


def power_of_two_presets(n: int) -> dict[str, int]:
    """a_i = 0 for every index i that is not a power of two."""
    return {f"a_{i}": 0 for i in range(n) if i == 0 or i & (i - 1)}


def u2k_patterns(m: int) -> dict[str, dict[str, int]]:
    n = 2**m
    single = {f"a_{i}": 0 for i in range(n)}
    single[f"a_{n - 1}"] = 1
    return {"powers_of_two": power_of_two_presets(n), "top_coefficient": single}


def u2k_experiment(m: int, limits: Limits | None = None, progress=None) -> dict:
    """Unipotent part for n = 2^m under two coefficient patterns.

    ``powers_of_two`` keeps a_i free exactly for i a power of two;
    ``top_coefficient`` is the single curve a_{n-1} = 1, other a_i = 0.
    Each pattern reports its beta relations and the l of every beta stratum.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    n = 2**m
    out = {"m": m, "n": n, "patterns": {}}
    for name, presets in u2k_patterns(m).items():
        Gu = unipotent_ideal(generic_family(n), presets, limits=limits, progress=progress)
        beta = extract_beta_polynomial(Gu)
        strata = [{"l": ell, "U": "Z_1" if ell == 0 else ra_string(ell, 1),
                   "conditions": Stratum(c, 1, ell).condition_strings()}
                  for ell, c in beta_strata(beta)]
        out["patterns"][name] = {"presets": presets, "beta_relations": [str(b) for b in beta],
                                 "strata": strata}
    return out
