"""Buchberger's algorithm over GF(2) with the Gebauer-Moeller criteria.

Reduction works directly on packed monomial keys: a heap yields the current
largest monomial and a ``live`` set tracks which monomials are present, so
adding a multiple of a reducer is a run of set toggles.
"""

from __future__ import annotations

import heapq
import os
import time
from dataclasses import asdict, dataclass, field

from .errors import FieldMismatch, LimitExceeded, VarSetMismatch
from .mpoly import MonomialOrder, MPoly


@dataclass
class Limits:
    max_pairs: int = 1_000_000
    max_basis_size: int = 10_000
    max_poly_terms: int = 1_000_000
    max_seconds: float | None = None

    @classmethod
    def from_env(cls, text: str | None = None) -> Limits:
        """Parse ``pairs=...,basis=...,terms=...,seconds=...`` (the ASAUT_LIMITS format)."""
        text = os.environ.get("ASAUT_LIMITS", "") if text is None else text
        lim = cls()
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, _, val = item.partition("=")
            key = _LIMIT_KEYS.get(key.strip(), key.strip())
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"unknown limit {key!r}")
            setattr(lim, key, float(val) if key == "max_seconds" else int(val))
        return lim


_LIMIT_KEYS = {"pairs": "max_pairs", "basis": "max_basis_size", "terms": "max_poly_terms", "seconds": "max_seconds"}


@dataclass
class Stats:
    pairs_processed: int = 0
    zero_reductions: int = 0
    basis_size: int = 0
    max_terms: int = 0
    pending_pairs: int = 0
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)


def _check_inputs(polys, order: MonomialOrder) -> list[MPoly]:
    out = []
    for f in polys:
        if f.field.degree != 1:
            raise FieldMismatch("Groebner bases are computed over GF(2) only")
        if f.varset != order.varset:
            raise VarSetMismatch("input polynomial lives in a different VarSet")
        f = f.reorder(order)
        if f:
            out.append(f)
    return out


class _Reducer:
    """Leading keys of the active basis plus their divisibility packs."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.polys: list[MPoly] = []
        self.heads: list[int] = []
        self.epacks: list[int] = []

    def add(self, f: MPoly) -> None:
        self.polys.append(f)
        self.heads.append(f._keys[0])
        self.epacks.append(self.order.epack(f._keys[0]))

    def find(self, key: int) -> int:
        e = self.order.epack(key)
        g = self.order.guard
        eg = e | g
        for i, ep in enumerate(self.epacks):
            if (eg - ep) & g == g:
                return i
        return -1

    def reduce(self, f: MPoly, max_terms: int | None = None, full: bool = True) -> MPoly:
        if not f._keys:
            return f
        live = set(f._keys)
        heap = [-k for k in f._keys]
        heapq.heapify(heap)
        rem: list[int] = []
        polys, heads = self.polys, self.heads
        while heap:
            k = -heapq.heappop(heap)
            if k not in live:
                continue
            live.discard(k)
            i = self.find(k)
            if i < 0:
                rem.append(k)
                if not full:
                    rem.extend(sorted(live, reverse=True))
                    break
                continue
            shift = k - heads[i]
            for t in polys[i]._keys[1:]:
                nk = t + shift
                if nk in live:
                    live.discard(nk)
                else:
                    live.add(nk)
                    heapq.heappush(heap, -nk)
            if max_terms is not None and len(live) > max_terms:
                raise LimitExceeded("intermediate polynomial too large", {"terms": len(live)})
        return MPoly(self.order, rem, field=f.field, _sorted=full)


def normal_form(f: MPoly, basis, order: MonomialOrder | None = None) -> MPoly:
    order = order or f.order
    red = _Reducer(order)
    for g in _check_inputs(basis, order):
        red.add(g)
    (f,) = _check_inputs([f], order) or [MPoly.zero(order)]
    return red.reduce(f)


def s_polynomial(f: MPoly, g: MPoly) -> MPoly:
    order = f.order
    lf, lg = f._keys[0], g._keys[0]
    lcm = order.lcm(lf, lg)
    return f.mul_monomial(lcm - lf) + g.mul_monomial(lcm - lg)


class Buchberger:
    def __init__(self, polys, order: MonomialOrder, limits: Limits | None = None, progress=None):
        self.order = order
        self.progress = progress
        self.limits = limits or Limits()
        self.inputs = _check_inputs(polys, order)
        self.stats = Stats()
        self.basis: list[MPoly] = []

    def _snapshot(self, pairs, G=(), active=()) -> dict:
        if G:
            self.basis = [g for g, a in zip(G, active) if a]
        self.stats.basis_size = len(self.basis)
        self.stats.pending_pairs = len(pairs)
        snap = asdict(self.stats)
        snap["basis_leading"] = [str(MPoly(self.order, g._keys[:1], _sorted=True)) for g in self.basis[:50]]
        return snap

    def run(self) -> list[MPoly]:
        order, lim = self.order, self.limits
        t0 = time.monotonic()
        G: list[MPoly] = []
        active: list[bool] = []
        pairs: list[tuple[int, int, int]] = []  # (lcm key, i, j)
        heads: list[int] = []

        def lcm(i, j):
            return order.lcm(heads[i], heads[j])

        def update(h_idx):
            nonlocal pairs
            h = heads[h_idx]
            cands = [(lcm(h_idx, j), j) for j in range(len(G) - 1) if active[j]]
            # chain criterion on the new pairs, then the product criterion
            keep = []
            for idx, (l1, j) in enumerate(cands):
                if order.coprime(h, heads[j]):
                    keep.append((l1, j, True))
                    continue
                dominated = False
                for idx2, (l2, j2) in enumerate(cands):
                    if idx2 == idx:
                        continue
                    if order.divides(l2, l1) and (l2 != l1 or idx2 < idx or order.coprime(h, heads[j2])):
                        dominated = True
                        break
                if not dominated:
                    keep.append((l1, j, False))
            new = [(l, j, h_idx) for l, j, cop in keep if not cop]
            # prune old pairs whose lcm is a proper multiple via h
            kept_old = []
            for l, i, j in pairs:
                if order.divides(h, l) and lcm(i, h_idx) != l and lcm(j, h_idx) != l:
                    continue
                kept_old.append((l, i, j))
            pairs = kept_old + new
            heapq.heapify(pairs)
            for j in range(len(G) - 1):
                if active[j] and order.divides(h, heads[j]):
                    active[j] = False

        red = _Reducer(order)

        def add(f):
            G.append(f)
            heads.append(f._keys[0])
            active.append(True)
            red.add(f)
            update(len(G) - 1)

        for f in sorted(self.inputs, key=lambda p: p._keys[0]):
            h = red.reduce(f, lim.max_poly_terms)
            if h:
                add(h)

        while pairs:
            if lim.max_seconds is not None and time.monotonic() - t0 > lim.max_seconds:
                self.stats.elapsed = time.monotonic() - t0
                raise LimitExceeded("time limit reached", self._snapshot(pairs, G, active))
            _, i, j = heapq.heappop(pairs)
            self.stats.pairs_processed += 1
            if self.progress is not None and self.stats.pairs_processed % 1000 == 0:
                self.stats.basis_size = sum(active)
                self.stats.pending_pairs = len(pairs)
                self.stats.elapsed = time.monotonic() - t0
                self.progress(self.stats)
            if self.stats.pairs_processed > lim.max_pairs:
                raise LimitExceeded("max_pairs reached", self._snapshot(pairs, G, active))
            s = s_polynomial(G[i], G[j])
            try:
                h = red.reduce(s, lim.max_poly_terms)
            except LimitExceeded as exc:
                raise LimitExceeded(str(exc), self._snapshot(pairs, G, active)) from None
            if not h:
                self.stats.zero_reductions += 1
                continue
            self.stats.max_terms = max(self.stats.max_terms, len(h))
            add(h)
            if sum(active) > lim.max_basis_size:
                self.basis = [g for g, a in zip(G, active) if a]
                raise LimitExceeded("max_basis_size reached", self._snapshot(pairs, G, active))

        self.basis = [g for g, a in zip(G, active) if a]
        self.stats.elapsed = time.monotonic() - t0
        self.stats.basis_size = len(self.basis)
        return self.basis


def reduce_basis(basis, order: MonomialOrder | None = None) -> list[MPoly]:
    """Minimal, inter-reduced, sorted by descending leading monomial."""
    basis = [g for g in basis if g]
    if not basis:
        return []
    order = order or basis[0].order
    basis = _check_inputs(basis, order)
    basis.sort(key=lambda g: g._keys[0])
    minimal: list[MPoly] = []
    for g in basis:
        if any(order.divides(m._keys[0], g._keys[0]) for m in minimal):
            continue
        minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        red = _Reducer(order)
        for j, other in enumerate(minimal):
            if j != idx:
                red.add(other)
        # the head stays since no other head divides it
        tail = MPoly(order, g._keys[1:], field=g.field, _sorted=True)
        out.append(MPoly(order, g._keys[:1], _sorted=True) + red.reduce(tail))
    out.sort(key=lambda g: g._keys[0], reverse=True)
    return out


def groebner_basis(polys, order: MonomialOrder, limits: Limits | None = None, stats: dict | None = None,
                   progress=None) -> list[MPoly]:
    """Reduced Groebner basis of the ideal generated by ``polys``."""
    engine = Buchberger(polys, order, limits, progress)
    raw = engine.run()
    result = reduce_basis(raw, order)
    if stats is not None:
        stats.update(asdict(engine.stats))
    return result


def is_groebner_basis(basis, order: MonomialOrder) -> bool:
    basis = _check_inputs(basis, order)
    red = _Reducer(order)
    for g in basis:
        red.add(g)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if order.coprime(basis[i]._keys[0], basis[j]._keys[0]):
                continue
            if red.reduce(s_polynomial(basis[i], basis[j])):
                return False
    return True


def ideal_contains(basis, f: MPoly) -> bool:
    order = basis[0].order if basis else f.order
    return not normal_form(f, basis, order)


def elimination_part(basis, keep) -> list[MPoly]:
    """Elements of a lex basis involving only the variables in ``keep``."""
    keep = set(keep)
    out = []
    for g in basis:
        if set(g.variables()) <= keep:
            out.append(g)
    return out
