"""Brute-force automorphism enumeration over GF(2^m).

For each alpha with alpha^{2n+1} = 1 every beta in the field is tried at
once (numpy arrays indexed by beta).  The gammas are then forced: reading the
x^l coefficients from l = 2n downwards, an even l yields gamma_{l/2} as a
square root, an odd l is a consistency check, and l = 0 leaves the
Artin-Schreier equation gamma_0^2 + gamma_0 = f(beta) with two roots or none.
Every survivor is re-checked against the defining identity.

Counting over one finite field only sees automorphisms defined there;
``stabilize`` walks up a chain of field degrees until the count settles.
"""

from __future__ import annotations

import functools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analyzer import FamilyAnalysis, GroupReport, _specialize_beta, ra_string
from .curve import (
    Automorphism,
    CurveSpec,
    automorphism_defect,
    compose_affine,
    scholten_zhu,
)
from .errors import FieldMismatch, NotStabilized, StructureViolation
from .ff2 import (
    MAX_DEGREE,
    Field,
    eval_univariate_array,
    field_create,
    multiplicative_order_of_two,
    sqrt_array,
    upoly_gcd,
    upoly_mod,
    upoly_trim,
)
from .mpoly import binom_mod2

SAMPLE_SEED = 0x5EED
FULL_PAIR_LIMIT = 1000
FULL_TABLE_LIMIT = 2000
SAMPLED_PAIRS = 100_000


# --------------------------------------------------------------------------
# results


@dataclass
class EnumerationResult:
    curve: CurveSpec
    automorphisms: list
    stabilized: bool = False
    counts: dict = field(default_factory=dict)
    settled_by: str | None = None
    # (alpha, beta) pairs passing every check but the Artin-Schreier one
    blocked: int = 0

    @property
    def field(self) -> Field:
        return self.curve.field

    @property
    def m(self) -> int:
        return self.curve.field.degree

    @property
    def n(self) -> int:
        return self.curve.n

    def __len__(self) -> int:
        return len(self.automorphisms)

    def raw(self) -> list[tuple]:
        return [a.as_ints() for a in self.automorphisms]

    @property
    def report(self) -> GroupReport | None:
        """(r, l) read off by counting; None when the counts do not have that shape."""
        alphas = {a.alpha.value for a in self.automorphisms}
        unip = {a.beta.value for a in self.automorphisms if a.alpha.value == 1}
        size = len(unip)
        if not size or size & (size - 1) or len(self) != 2 * size * len(alphas):
            return None
        if (2 * self.n + 1) % len(alphas):
            return None
        return GroupReport(self.n, len(alphas), size.bit_length() - 1, source="oracle")

    def to_json(self, dump: bool = False) -> dict:
        rep = self.report
        d = {
            "n": self.n,
            "curve": str(self.curve),
            "field_degree": self.m,
            "modulus": self.field.modulus,
            "modulus_bits": format(self.field.modulus, "b"),
            "count": len(self),
            "stabilized": self.stabilized,
            "settled_by": self.settled_by,
            "counts": {str(k): v for k, v in self.counts.items()},
            "group_report": rep.to_json() if rep else None,
        }
        if dump:
            d["automorphisms"] = [a.to_json() for a in self.automorphisms]
        return d


# --------------------------------------------------------------------------
# enumeration


def _shifted_coeffs(F: Field, fco: list[int], alpha: int, l: int) -> list[tuple[int, int]]:
    """x^l coefficient of f(alpha x + beta) as a polynomial in beta: [(exponent, coeff)]."""
    al = F.pow_raw(alpha, l)
    out = []
    for k in range(l, len(fco)):
        if fco[k] and binom_mod2(k, l):
            out.append((k - l, F.mul_raw(fco[k], al)))
    return out


def _solve_alpha(curve: CurveSpec, alpha: int, betas: np.ndarray) -> tuple[list[tuple[int, int, tuple]], int]:
    F, n = curve.field, curve.n
    fco = curve.f_coeffs()
    ok = np.ones(betas.shape, dtype=bool)
    gam: dict[int, np.ndarray] = {}
    for l in range(2 * n, 0, -1):
        rhs = eval_univariate_array(F, _shifted_coeffs(F, fco, alpha, l), betas) ^ fco[l]
        if l <= n:
            rhs = rhs ^ gam[l]
        if l % 2 == 0:
            gam[l // 2] = sqrt_array(F, rhs)
        else:
            ok &= rhs == 0
    # f(0) = 0, so the constant term is f(beta)
    t = eval_univariate_array(F, _shifted_coeffs(F, fco, alpha, 0), betas)
    z = F.as_root_table()[t]
    blocked = int(np.count_nonzero(ok & (z < 0)))
    ok &= z >= 0
    out = []
    for i in np.nonzero(ok)[0]:
        gs = tuple(int(gam[k][i]) for k in range(n, 0, -1))
        out.append((alpha, int(betas[i]), gs + (int(z[i]),)))
        out.append((alpha, int(betas[i]), gs + (int(z[i]) ^ 1,)))
    return out, blocked


def enumerate_automorphisms(curve: CurveSpec, threads: int = 1) -> EnumerationResult:
    """Every automorphism of ``curve`` defined over its coefficient field."""
    if curve.field is None:
        raise ValueError("enumeration needs a concrete curve")
    F, n = curve.field, curve.n
    betas = np.arange(F.order, dtype=np.int64)
    alphas = F.roots_of_unity(2 * n + 1)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda a: _solve_alpha(curve, a, betas), alphas))
    else:
        parts = [_solve_alpha(curve, a, betas) for a in alphas]
    fco = curve.f_coeffs()
    found = []
    for part, _ in parts:
        for a, b, gs in part:
            gamma = list(reversed(gs))
            if automorphism_defect(F, fco, a, b, gamma):
                continue
            found.append((a, b, gs))
    found.sort()
    auts = [Automorphism.from_ints(F, a, b, gs) for a, b, gs in found]
    return EnumerationResult(curve, auts, counts={F.degree: len(auts)}, blocked=sum(b for _, b in parts))


# --------------------------------------------------------------------------
# stabilization


def default_schedule(n: int, cap: int = MAX_DEGREE, base: int = 1, alpha_order: int | None = None) -> list[int]:
    """Every multiple of lcm(m0, base) up to ``cap``.

    GF(2^m0) is the smallest field holding the alpha_order-th roots of unity
    (alpha_order defaults to 2n+1).
    """
    m0 = math.lcm(multiplicative_order_of_two(alpha_order or 2 * n + 1), base)
    return list(range(m0, cap + 1, m0))


def _has_shape(count: int, n: int) -> bool:
    if count % 2:
        return False
    rest = count // 2
    r = math.gcd(rest, 2 * n + 1)
    while r > 1 and rest % r == 0:
        rest //= r
        r = math.gcd(rest, 2 * n + 1)
    return rest & (rest - 1) == 0


def _saturated(count: int, n: int) -> bool:
    # odd n: the unipotent part is trivial, so every alpha carries at most one beta
    return n % 2 == 1 and n >= 3 and count == 2 * (2 * n + 1)


def _settled_by(counts: dict[int, int], n: int, degree_hint: int | None = None,
                blocked: dict[int, int] | None = None) -> str | None:
    best = max(counts.values())
    m_star = min(m for m, c in counts.items() if c == best)
    if not _has_shape(best, n):
        return None
    if _saturated(best, n):
        return "saturated"
    if degree_hint is None:
        if any(m != m_star and m % m_star == 0 and c == best for m, c in counts.items()):
            return "repeated"
        return None
    blocked = blocked or {}
    if any(c == best and m % degree_hint == 0 and (m % (2 * degree_hint) == 0 or not blocked.get(m, 1))
           for m, c in counts.items()):
        return "predicted degree"
    return None


@functools.cache
def _embedding_root(small: Field, big: Field) -> int:
    """Smallest encoding in ``big`` of a root of ``small``'s modulus."""
    if big.degree % small.degree:
        raise FieldMismatch(f"GF(2^{small.degree}) is not a subfield of GF(2^{big.degree})")
    mod = [(i, 1) for i in range(small.degree + 1) if small.modulus >> i & 1]
    vals = eval_univariate_array(big, mod, np.arange(big.order, dtype=np.int64))
    return int(np.nonzero(vals == 0)[0][0])


def embed(value: int, small: Field, big: Field) -> int:
    """Image of the encoding ``value`` of ``small`` under a fixed embedding into ``big``."""
    if small is big or value < 2:
        return value
    rho = _embedding_root(small, big)
    out, p = 0, 1
    for i in range(small.degree):
        if value >> i & 1:
            out ^= p
        p = big.mul_raw(p, rho)
    return out


def embed_curve(curve: CurveSpec, big: Field) -> CurveSpec:
    small = curve.field
    return CurveSpec(curve.n, tuple(big(embed(c.value, small, big)) for c in curve.coeffs), big)


def stabilize(curve: CurveSpec, schedule=None, threads: int = 1, progress=None,
              alpha_order: int | None = None, degree_hint: int | None = None) -> EnumerationResult:
    """Enumerate over GF(2^m) for every m in ``schedule`` and keep the largest count.

    The curve's coefficients are embedded in each GF(2^m), so every m must be
    a multiple of the coefficient field's degree.

    The largest count C (first reached at m*) must have the shape 2^{l+1} r
    with r | 2n+1.  For odd n >= 3 it is final when it equals the bound
    2(2n+1).  Otherwise, without ``degree_hint``, C is accepted when it recurs
    at a multiple of m*; this is a heuristic, since a plateau can hide
    automorphisms over a larger field.  A hint is a degree holding every
    admissible (alpha, beta), supplied by the caller from the symbolic beta
    relations.  Counts at its multiples are final once no pair is blocked by
    the Artin-Schreier step for gamma_0, and at multiples of twice the hint in
    any case.

    The default schedule walks the
    multiples of the degree m0 of the ``alpha_order``-th roots of unity
    (default 2n+1); a smaller alpha_order trades coverage of alpha for
    reachable fields.
    """
    if curve.field is None:
        raise ValueError("stabilize needs a concrete curve")
    j = curve.field.degree
    alpha_order = alpha_order or 2 * curve.n + 1
    if schedule is None:
        schedule = default_schedule(curve.n, base=j, alpha_order=alpha_order)
    schedule = sorted(schedule)
    if not schedule:
        raise NotStabilized(f"empty schedule for n={curve.n}", {})
    counts: dict[int, int] = {}
    results: dict[int, EnumerationResult] = {}
    blocked: dict[int, int] = {}
    for m in schedule:
        res = enumerate_automorphisms(embed_curve(curve, field_create(m)), threads)
        counts[m] = len(res)
        blocked[m] = res.blocked
        results[m] = res
        if progress is not None:
            progress(m, len(res))
    how = _settled_by(counts, curve.n, degree_hint, blocked)
    if how is None:
        raise NotStabilized(f"counts {counts} did not settle on schedule {schedule}", counts)
    best = max(counts.values())
    res = results[min(m for m, c in counts.items() if c == best)]
    res.counts = counts
    res.stabilized = True
    res.settled_by = how
    return res


# --------------------------------------------------------------------------
# group structure


class _Group:
    """Automorphisms as raw tuples (alpha, beta, Gamma low-first) with fast composition."""

    def __init__(self, res: EnumerationResult):
        self.F = res.field
        self.n = res.n
        self.elems = [(a, b, tuple(reversed(gs))) for a, b, gs in res.raw()]
        self.index = {e: i for i, e in enumerate(self.elems)}

    def _norm(self, gamma: list[int]) -> tuple:
        gamma = upoly_trim(list(gamma))
        if len(gamma) > self.n + 1:
            raise StructureViolation(f"composite offset of degree {len(gamma) - 1} exceeds n")
        return tuple(gamma + [0] * (self.n + 1 - len(gamma)))

    def mul(self, x: tuple, y: tuple) -> tuple:
        """x after y."""
        F = self.F
        a1, b1, g1 = x
        a2, b2, g2 = y
        h = compose_affine(F, list(g1), a2, b2)
        g = [c ^ (g2[i] if i < len(g2) else 0) for i, c in enumerate(h)]
        g += list(g2[len(g):])
        return F.mul_raw(a1, a2), F.mul_raw(a1, b2) ^ b1, self._norm(g)

    def identity(self) -> tuple:
        return 1, 0, (0,) * (self.n + 1)

    def sigma(self) -> tuple:
        return 1, 0, (1,) + (0,) * self.n

    def pairs(self, full_limit: int, samples: int):
        N = len(self.elems)
        if N <= full_limit:
            return "full", ((x, y) for x in self.elems for y in self.elems)
        rng = random.Random(SAMPLE_SEED)
        els = self.elems
        return "sampled", ((els[rng.randrange(N)], els[rng.randrange(N)]) for _ in range(samples))


def _show(e: tuple) -> str:
    a, b, g = e
    return f"({a},{b};{','.join(map(str, reversed(g)))})"


def verify_group_structure(res: EnumerationResult, full_limit: int = FULL_PAIR_LIMIT,
                           samples: int = SAMPLED_PAIRS) -> GroupReport:
    """Check the kernel, the unipotent part, the alpha image and the tau product law."""
    G = _Group(res)
    F, n = G.F, G.n
    ident, sigma = G.identity(), G.sigma()
    kernel = sorted(e for e in G.elems if e[0] == 1 and e[1] == 0)
    if kernel != sorted([ident, sigma]):
        raise StructureViolation(f"Ker tau = {[_show(e) for e in kernel]} is not {{id, sigma}}", kernel)

    unip = sorted({e[1] for e in G.elems if e[0] == 1})
    U = set(unip)
    for b1 in unip:
        for b2 in unip:
            if b1 ^ b2 not in U:
                raise StructureViolation(f"U not closed under addition: {b1} + {b2}", (b1, b2))
    size = len(unip)
    if size & (size - 1):
        raise StructureViolation(f"|U| = {size} is not a power of two", size)
    for e in G.elems:
        if e[0] == 1 and G.mul(e, e) not in (ident, sigma):
            raise StructureViolation(f"{_show(e)} has order > 2 in tau image", e)

    A = sorted({e[0] for e in G.elems})
    Aset = set(A)
    r = len(A)
    if (2 * n + 1) % r:
        raise StructureViolation(f"#Im rho = {r} does not divide {2 * n + 1}", A)
    for x in A:
        for y in A:
            if F.mul_raw(x, y) not in Aset:
                raise StructureViolation(f"Im rho not closed: {x} * {y}", (x, y))
    if not any(_mult_order(F, x) == r for x in A):
        raise StructureViolation(f"Im rho of order {r} is not cyclic", A)
    if len(G.elems) != 2 * size * r:
        raise StructureViolation(f"|Aut| = {len(G.elems)} but 2 |U| #Im rho = {2 * size * r}")

    for e in G.elems:
        if G.mul(sigma, e) != G.mul(e, sigma):
            raise StructureViolation(f"sigma does not commute with {_show(e)}", e)

    _, pairs = G.pairs(full_limit, samples)
    for x, y in pairs:
        p = G.mul(x, y)
        if p not in G.index:
            raise StructureViolation(f"{_show(x)} * {_show(y)} is not in the list", (x, y))
        want = (F.mul_raw(x[0], y[0]), F.mul_raw(x[0], y[1]) ^ x[1])
        if p[:2] != want:
            raise StructureViolation(f"tau product law fails for {_show(x)}, {_show(y)}", (x, y))
    ell = size.bit_length() - 1
    return GroupReport(n, r, ell, source="oracle")


def _mult_order(F: Field, x: int) -> int:
    k, y = 1, x
    while y != 1:
        y = F.mul_raw(y, x)
        k += 1
    return k


def composition_table(res: EnumerationResult, full_limit: int = FULL_TABLE_LIMIT, samples: int = SAMPLED_PAIRS,
                      triples: int = 2000) -> dict:
    """Closure, associativity (sampled triples) and inverses; returns a certificate dict."""
    G = _Group(res)
    ident = G.identity()
    if ident not in G.index:
        raise StructureViolation("identity missing")
    mode, pairs = G.pairs(full_limit, samples)
    checked = 0
    for x, y in pairs:
        if G.mul(x, y) not in G.index:
            raise StructureViolation(f"{_show(x)} * {_show(y)} is not in the list", (x, y))
        checked += 1
    rng = random.Random(SAMPLE_SEED)
    els = G.elems
    for _ in range(triples):
        x, y, z = (els[rng.randrange(len(els))] for _ in range(3))
        if G.mul(G.mul(x, y), z) != G.mul(x, G.mul(y, z)):
            raise StructureViolation(f"associativity fails on {_show(x)}, {_show(y)}, {_show(z)}", (x, y, z))
    for x in els:
        a, b, g = x
        ai = G.F.inv_raw(a)
        bi = G.F.mul_raw(ai, b)
        inv = (ai, bi, G._norm(compose_affine(G.F, list(g), ai, bi)))
        if inv not in G.index or G.mul(x, inv) != ident or G.mul(inv, x) != ident:
            raise StructureViolation(f"{_show(x)} has no inverse in the list", x)
    return {"size": len(els), "mode": mode, "pairs_checked": checked, "triples_checked": triples,
            "closed": True, "associative": True, "inverses": True}


# --------------------------------------------------------------------------
# witnesses for strata


def _splitting_degree(F: Field, g: list[int], cap: int = MAX_DEGREE) -> int | None:
    """Smallest K (a multiple of F's degree) with g | beta^{2^K} + beta, i.e. all roots in GF(2^K)."""
    if len(g) <= 2:
        return F.degree
    x = [0, 1]
    p = x
    for k in range(1, cap + 1):
        sq = [0] * (2 * len(p))
        for i, c in enumerate(p):
            sq[2 * i] = F.mul_raw(c, c)
        p = upoly_mod(F, upoly_trim(sq), g)
        if k % F.degree == 0 and upoly_trim(list(p)) == [0, 1]:
            return k
    return None


def _beta_gcd(analysis: FamilyAnalysis, values: dict, F: Field) -> list[int]:
    g: list[int] = []
    for rel in analysis.beta_data:
        s = upoly_trim(_specialize_beta(rel, values, F))
        g = upoly_gcd(F, g, s) if g else s
    return g


def _unipotent_lifts(curve: CurveSpec, m: int, roots: int) -> bool:
    """Whether alpha = 1 gives 2 * ``roots`` automorphisms over GF(2^m)."""
    F = field_create(m)
    big = embed_curve(curve, F)
    return len(_solve_alpha(big, 1, np.arange(F.order, dtype=np.int64))[0]) == 2 * roots


def stratum_witnesses(analysis: FamilyAnalysis, max_degree: int = 4, cap: int = MAX_DEGREE,
                      max_points: int = 50_000) -> list[dict]:
    """One witness point per stratum, scanned over GF(2^j) for j <= ``max_degree``.

    A point is usable when the field holding mu_r (r from the stratum), the
    coefficients and the roots of the specialized beta relations has degree
    m* <= cap.  Points come first when every root beta of those relations
    already lifts to automorphisms with alpha = 1 over GF(2^m*) (gamma_0 may
    need a quadratic extension otherwise), then those where a field of
    degree <= cap also holds all of mu_{2n+1}, so the oracle sees every
    alpha.  Then the smallest m* wins,
    then the smallest j, then weight, then encoding order.  Larger coefficient fields
    are only scanned while some stratum lacks a first-tier witness.
    """
    from itertools import product

    params = list(analysis.family.params)
    full = multiplicative_order_of_two(2 * analysis.n + 1)
    found: dict[int, tuple] = {}
    for j in range(1, max_degree + 1):
        if len(found) == len(analysis.strata) and all(f[0][:2] == (0, 0) for f in found.values()):
            break
        F = field_create(j)
        points = sorted(product(range(F.order), repeat=len(params)),
                        key=lambda v: (sum(x != 0 for x in v), v))[:max_points]
        for v in points:
            vals = {p: F(x) for p, x in zip(params, v)}
            for idx, s in enumerate(analysis.strata):
                if not s.holds(vals):
                    continue
                g = _beta_gcd(analysis, vals, F)
                K = _splitting_degree(F, g, cap) if g else None
                if K is None:
                    break
                need = math.lcm(multiplicative_order_of_two(s.r), j, K)
                if need > cap:
                    break
                certifiable = math.lcm(full, need) <= cap
                if idx in found and found[idx][0] <= (0, 0 if certifiable else 1, need, j):
                    break
                curve = witness_curve(analysis, {p: x for p, x in zip(params, v)}, j)
                lifted = _unipotent_lifts(curve, need, len(g) - 1)
                key = (0 if lifted else 1, 0 if certifiable else 1, need, j)
                if idx not in found or key < found[idx][0]:
                    found[idx] = (key, j, v, K)
                break
    out = []
    for idx, s in enumerate(analysis.strata):
        entry = {"family": analysis.family.label, "ra": s.ra, "aut_order": s.aut_order,
                 "conditions": s.condition_strings()}
        if idx in found:
            (_, _, need, _), j, v, K = found[idx]
            entry.update(field_degree=j, coeffs={p: x for p, x in zip(params, v) if x},
                         beta_split_degree=K, needed_degree=need)
        else:
            entry.update(field_degree=None, coeffs=None)
        out.append(entry)
    return out


def witness_curve(analysis: FamilyAnalysis, coeffs: dict, field_degree: int = 1) -> CurveSpec:
    fam = analysis.family
    if fam.sz is not None:
        return scholten_zhu(fam.sz, coeffs, field_degree)
    return CurveSpec.concrete(fam.n, coeffs, field_degree)


def agreement_schedules(analysis: FamilyAnalysis, values: dict, F: Field, r: int,
                        cap: int = MAX_DEGREE) -> list[tuple[int, list[int], int]]:
    """(alpha_order, schedule, degree_hint) plans for comparing an enumeration with the stratum predicting ``r``.

    Every schedule point is a multiple of the degree holding mu_r, the
    coefficients and the roots of the specialized beta relations.  The plan
    covering the full mu_{2n+1} comes first; the mu_r plan is the fallback.
    Empty when even mu_r needs a field beyond ``cap``.
    """
    g = _beta_gcd(analysis, values, F)
    K = _splitting_degree(F, g, cap) if g else None
    if K is None:
        return []
    need = math.lcm(multiplicative_order_of_two(r), F.degree, K)
    plans = []
    for order in dict.fromkeys((2 * analysis.n + 1, r)):
        sched = default_schedule(analysis.n, cap, base=need, alpha_order=order)
        if sched:
            plans.append((order, sched, sched[0]))
    return plans


def stabilize_point(analysis: FamilyAnalysis, coeffs: dict, field_degree: int = 1, threads: int = 1,
                    progress=None) -> tuple[EnumerationResult, int, int | None]:
    """Stabilize the curve at a coefficient point along the plans of its stratum.

    Returns the result, the alpha order covered and the predicted #Aut
    (None when the point does not fall in exactly one stratum, in which case
    the plain recurrence rule of ``stabilize`` decides).  When the full
    mu_{2n+1} plan cannot settle, only mu_r is covered and an alpha outside
    it goes unseen.
    """
    curve = witness_curve(analysis, coeffs, field_degree)
    F = curve.field
    vals = {p: F(coeffs.get(p, 0)) for p in analysis.family.params}
    matched = [s for s in analysis.strata if s.holds(vals)]
    expect = matched[0].aut_order if len(matched) == 1 else None
    if len(matched) == 1:
        plans = agreement_schedules(analysis, vals, F, matched[0].r)
        if not plans:
            raise NotStabilized(f"the admissible betas need a field beyond GF(2^{MAX_DEGREE})", {})
    else:
        plans = [(2 * analysis.n + 1, None, None)]
    for i, (order, sched, need) in enumerate(plans):
        try:
            res = stabilize(curve, sched, threads, progress, alpha_order=order, degree_hint=need)
            return res, order, expect
        except NotStabilized:
            if i == len(plans) - 1:
                raise
    raise AssertionError("unreachable")  # pragma: no cover


def check_witness(analysis: FamilyAnalysis, coeffs: dict, field_degree: int = 1, threads: int = 1) -> dict:
    """Stabilize a witness, verify its group structure and compare with the symbolic stratum."""
    res, order, expect = stabilize_point(analysis, coeffs, field_degree, threads)
    rep = verify_group_structure(res)
    return {"curve": str(witness_curve(analysis, coeffs, field_degree)), "field_degree": field_degree,
            "m": res.m, "counts": res.counts,
            "settled_by": res.settled_by, "count": len(res), "ra": ra_string(rep.ell, rep.r),
            "alpha_order": order, "expected": expect, "agree": expect == len(res)}
