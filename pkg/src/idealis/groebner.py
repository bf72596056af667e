"""Reduced Groebner bases (Buchberger with product/chain criteria and sugar
selection) and the ideal operations built on them: membership, containment,
intersection, powers, elimination, radical membership, graded pieces.

Two arithmetic engines sit under one driver: a compiled kernel for prime
fields with a degrevlex order on at most 4 variables (the hot path of the
big modular runs), and a generic engine for every other field/order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from . import _kernel
from .errors import MissingBasis, ResourceLimit, RingMismatch
from .field import PrimeField, field_from_descriptor
from .monomial import Block, Degrevlex, order_from_name
from .poly import Polynomial, Ring

_KERNEL_MAX_VARS = 4  # 12-bit fields: deg + 4 complements = 60 bits


@dataclass(frozen=True)
class ResourceCaps:
    """First-class limits; hitting one raises ResourceLimit, never a crash."""

    max_pairs: int = 1_000_000
    max_basis_terms: int = 20_000_000
    max_steps: int = 2_000_000_000

    def as_dict(self):
        return {
            "max_pairs": self.max_pairs,
            "max_basis_terms": self.max_basis_terms,
            "max_steps": self.max_steps,
        }


DEFAULT_CAPS = ResourceCaps()


class Ideal:
    """Generator list plus an optional cached reduced basis with its order."""

    __slots__ = ("ring", "gens", "_basis", "_basis_order")

    def __init__(self, ring, gens):
        gens = tuple(gens)
        for g in gens:
            if not isinstance(g, Polynomial) or g.ring != ring:
                raise RingMismatch("generator from a different ring")
            if g.is_zero():
                raise ValueError("generators must be nonzero")
        self.ring = ring
        self.gens = gens
        self._basis = None
        self._basis_order = None

    def basis(self):
        if self._basis is None:
            raise MissingBasis("no cached Groebner basis; call groebner_basis first")
        return self._basis

    def basis_order(self):
        if self._basis is None:
            raise MissingBasis("no cached Groebner basis")
        return self._basis_order

    def has_basis(self):
        return self._basis is not None

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens over {self.ring!r})"


# ---------------------------------------------------------------------------
# arithmetic engines


class _KernelEngine:
    """F_p + degrevlex via the (compiled or fallback) reduction kernel."""

    def __init__(self, ring, caps):
        order = ring.order
        self.ring = ring
        self.red = _kernel.Reducer(
            ring.field.p, order.mul_offset, order.guard_mask, order.tail_mask
        )
        self.red.step_cap = caps.max_steps

    def add(self, poly):
        keys = [k for k, _ in poly.terms]
        coeffs = [c for _, c in poly.terms]
        self.red.add(keys, coeffs)

    def nf(self, poly):
        keys, coeffs = self.red.nf(
            [k for k, _ in poly.terms], [c for _, c in poly.terms]
        )
        return Polynomial(self.ring, tuple(zip(keys, coeffs)))

    def spoly_nf(self, i, j, lcm_key):
        keys, coeffs = self.red.spoly_nf(i, j, lcm_key)
        return Polynomial(self.ring, tuple(zip(keys, coeffs)))

    def total_terms(self):
        return self.red.total_terms()


class _GenericEngine:
    """Any exact field, any global order; plain Python term merging."""

    def __init__(self, ring, caps):
        self.ring = ring
        self.elems = []
        self.steps = 0
        self.step_cap = caps.max_steps

    def add(self, poly):
        self.elems.append((list(poly.terms), poly.lead_key))

    def nf(self, poly):
        return self._reduce(list(poly.terms))

    def spoly_nf(self, i, j, lcm_key):
        order = self.ring.order
        fld = self.ring.field
        ti, li = self.elems[i]
        tj, lj = self.elems[j]
        di = order.div(lcm_key, li)
        dj = order.div(lcm_key, lj)
        work = {}
        for k, c in ti:
            work[order.mul(k, di)] = c
        for k, c in tj:
            kk = order.mul(k, dj)
            if kk in work:
                v = fld.sub(work[kk], c)
                if fld.is_zero(v):
                    del work[kk]
                else:
                    work[kk] = v
            else:
                work[kk] = fld.neg(c)
        terms = [(k, work[k]) for k in sorted(work, reverse=True)]
        return self._reduce(terms)

    def _reduce(self, work):
        ring = self.ring
        order = ring.order
        fld = ring.field
        divides = order.divides
        result = []
        pos = 0
        while pos < len(work):
            key, c = work[pos]
            target = -1
            for t, (_, lead) in enumerate(self.elems):
                if divides(lead, key):
                    target = t
                    break
            if target < 0:
                result.append((key, c))
                pos += 1
                continue
            self.steps += 1
            if self.step_cap and self.steps > self.step_cap:
                raise _kernel.StepLimit("reduction step cap exceeded")
            gterms, glead = self.elems[target]
            delta = order.div(key, glead)
            merged = []
            a, b = pos + 1, 1
            na, nb = len(work), len(gterms)
            while a < na and b < nb:
                ka, ca = work[a]
                kb = order.mul(gterms[b][0], delta)
                if ka > kb:
                    merged.append((ka, ca))
                    a += 1
                elif ka < kb:
                    merged.append((kb, fld.neg(fld.mul(c, gterms[b][1]))))
                    b += 1
                else:
                    cc = fld.sub(ca, fld.mul(c, gterms[b][1]))
                    if not fld.is_zero(cc):
                        merged.append((ka, cc))
                    a += 1
                    b += 1
            merged.extend(work[a:])
            while b < nb:
                kb = order.mul(gterms[b][0], delta)
                merged.append((kb, fld.neg(fld.mul(c, gterms[b][1]))))
                b += 1
            work = merged
            pos = 0
        return Polynomial(ring, tuple(result))

    def total_terms(self):
        return sum(len(t) for t, _ in self.elems)


def _make_engine(ring, caps):
    if (
        isinstance(ring.field, PrimeField)
        and isinstance(ring.order, Degrevlex)
        and len(ring.vars) <= _KERNEL_MAX_VARS
    ):
        return _KernelEngine(ring, caps)
    return _GenericEngine(ring, caps)


# ---------------------------------------------------------------------------
# Buchberger driver


def _buchberger(gens, ring, caps, progress=None):
    """Reduced Groebner basis of `gens` in `ring`; deterministic."""
    order = ring.order
    seen = set()
    work = []
    for g in gens:
        if g.is_zero():
            continue
        m = g.monic()
        if m.terms not in seen:
            seen.add(m.terms)
            work.append(m)
    if not work:
        return ()

    engine = _make_engine(ring, caps)
    leads = []  # lead keys, parallel to engine elements
    sugars = []
    alive = []
    pair_state = {}  # (i, j) -> True while pending
    heap = []

    def lcm_key(i, j):
        return order.lcm(leads[i], leads[j])

    def push_pair(i, j):
        lk = lcm_key(i, j)
        deg_l = order.degree(lk)
        s = max(
            sugars[i] + deg_l - order.degree(leads[i]),
            sugars[j] + deg_l - order.degree(leads[j]),
        )
        pair_state[(i, j)] = True
        heapq.heappush(heap, (s, order.exps(lk), i, j))

    def update(h):
        # Gebauer-Moeller installation of element h into the pair set
        t = len(leads)
        lm_h = h.lead_key
        candidates = [i for i in range(t) if alive[i]]
        lcms = {i: order.lcm(leads[i], lm_h) for i in candidates}
        kept = []
        remaining = list(candidates)
        while remaining:
            i = remaining.pop(0)
            li = lcms[i]
            if order.coprime(leads[i], lm_h) or not any(
                lcms[j] != li and order.divides(lcms[j], li)
                for j in remaining + kept
            ):
                kept.append(i)
        new_pairs = [i for i in kept if not order.coprime(leads[i], lm_h)]
        # filter existing pairs through the chain criterion
        for (i, j) in list(pair_state):
            lk = lcm_key(i, j)
            if (
                order.divides(lm_h, lk)
                and order.lcm(leads[i], lm_h) != lk
                and order.lcm(lm_h, leads[j]) != lk
            ):
                del pair_state[(i, j)]
        for i in range(t):
            if alive[i] and order.divides(lm_h, leads[i]):
                alive[i] = False
        engine.add(h)
        leads.append(lm_h)
        sugars.append(max(order.degree(k) for k, _ in h.terms))
        alive.append(True)
        for i in new_pairs:
            push_pair(i, t)

    for g in work:
        update(g)

    pairs_done = 0
    try:
        while heap:
            s, _, i, j = heapq.heappop(heap)
            if not pair_state.pop((i, j), False):
                continue
            pairs_done += 1
            if pairs_done > caps.max_pairs:
                raise ResourceLimit(
                    "S-pair cap exceeded",
                    {"pairs": pairs_done, "basis": len(leads)},
                )
            h = engine.spoly_nf(i, j, lcm_key(i, j))
            if engine.total_terms() > caps.max_basis_terms:
                raise ResourceLimit(
                    "basis term cap exceeded",
                    {"pairs": pairs_done, "terms": engine.total_terms()},
                )
            if progress is not None and pairs_done % 512 == 0:
                progress(pairs_done, len(heap), len(leads))
            if not h.is_zero():
                h = h.monic()
                update(h)
    except _kernel.StepLimit as exc:
        raise ResourceLimit(
            "reduction step cap exceeded",
            {"pairs": pairs_done, "basis": len(leads)},
        ) from exc

    basis = [engine_poly for engine_poly in _alive_polys(engine, alive)]
    return _final_reduce(basis, ring, caps)


def _alive_polys(engine, alive):
    out = []
    for i, ok in enumerate(alive):
        if not ok:
            continue
        if isinstance(engine, _KernelEngine):
            keys, coeffs = engine.red.element(i)
            out.append(Polynomial(engine.ring, tuple(zip(keys, coeffs))))
        else:
            terms, _ = engine.elems[i]
            out.append(Polynomial(engine.ring, tuple(terms)))
    return out


def _final_reduce(basis, ring, caps):
    """Minimalize then tail-reduce; ascending processing yields the unique
    reduced basis in one pass."""
    order = ring.order
    basis = sorted(basis, key=lambda f: f.lead_key)
    minimal = []
    for f in basis:
        if not any(order.divides(g.lead_key, f.lead_key) for g in minimal):
            minimal.append(f)
    engine = _make_engine(ring, caps)
    out = []
    try:
        for f in minimal:
            h = engine.nf(f).monic()
            engine.add(h)
            out.append(h)
    except _kernel.StepLimit as exc:
        raise ResourceLimit("reduction step cap exceeded in final reduction") from exc
    return tuple(out)


# ---------------------------------------------------------------------------
# public operations


def groebner_basis(ideal, order=None, caps=DEFAULT_CAPS, progress=None):
    """Attach (and return) the reduced Groebner basis for the given order."""
    ring = ideal.ring
    target = order if order is not None else ring.order
    if ideal.has_basis() and ideal.basis_order() == target:
        return ideal
    if target == ring.order:
        gb_ring = ring
        gens = ideal.gens
    else:
        gb_ring = ring.with_order(target)
        gens = tuple(gb_ring.convert(g) for g in ideal.gens)
    basis = _buchberger(gens, gb_ring, caps, progress=progress)
    ideal._basis = basis
    ideal._basis_order = target
    return ideal


def normal_form(f, ideal):
    """Complete remainder of f against the ideal's cached reduced basis."""
    basis = ideal.basis()
    if basis and basis[0].ring.field != f.ring.field:
        raise RingMismatch("normal form across different fields")
    if basis and f.ring.vars != basis[0].ring.vars:
        raise RingMismatch("normal form across different rings")
    if not basis:
        return f
    ring = basis[0].ring
    g = ring.convert(f) if f.ring != ring else f
    engine = _make_engine(ring, DEFAULT_CAPS)
    for b in basis:
        engine.add(b)
    result = engine.nf(g)
    return f.ring.convert(result) if f.ring != ring else result


def ideal_membership(f, ideal, caps=DEFAULT_CAPS):
    if f.is_zero():
        return True
    groebner_basis(ideal, caps=caps)
    return normal_form(f, ideal).is_zero()


def ideal_containment(a, b, caps=DEFAULT_CAPS):
    """A subseteq B: every generator of A reduces to zero against GB(B)."""
    if a.ring != b.ring:
        raise RingMismatch("containment requires a common ring")
    groebner_basis(b, caps=caps)
    return all(normal_form(g, b).is_zero() for g in a.gens)


def ideal_power(ideal, r):
    if r < 1:
        raise ValueError("power must be >= 1")
    gens = list(ideal.gens)
    out = []
    seen = set()

    def rec(start, acc, depth):
        if depth == r:
            if acc.terms not in seen:
                seen.add(acc.terms)
                out.append(acc)
            return
        for i in range(start, len(gens)):
            rec(i, acc * gens[i], depth + 1)

    rec(0, ideal.ring.one, 0)
    return Ideal(ideal.ring, out)


def eliminate(ideal, front, caps=DEFAULT_CAPS):
    """Generators of I intersected with the subring without `front` vars."""
    ring = ideal.ring
    front = tuple(front)
    for v in front:
        if v not in ring.vars:
            raise ValueError(f"{v!r} is not a ring variable")
    if not front:
        groebner_basis(ideal, caps=caps)
        return ideal
    rest = tuple(v for v in ring.vars if v not in front)
    if not rest:
        raise ValueError("cannot eliminate every variable")
    block_ring = Ring(front + rest, ring.field, Block(len(front), len(ring.vars)))
    gens = tuple(ring.inject(g, block_ring) for g in ideal.gens)
    basis = _buchberger(gens, block_ring, caps)
    down = Ring(rest, ring.field)
    kept = []
    for b in basis:
        if block_ring.order.front_degree(b.lead_key) == 0:
            kept.append(block_ring.inject(b, down))
    result = Ideal(down, kept)
    result._basis = tuple(kept)
    result._basis_order = down.order
    return result


def ideal_intersection(a, b, caps=DEFAULT_CAPS):
    """A cap B by the t-trick: eliminate t from t*A + (1-t)*B."""
    if a.ring != b.ring:
        raise RingMismatch("intersection requires a common ring")
    ring = a.ring
    ext = ring.extend_front(("t_aux",), Block(1, len(ring.vars) + 1))
    t = ext.var("t_aux")
    one_minus_t = ext.one - t
    gens = [t * ring.inject(g, ext) for g in a.gens]
    gens += [one_minus_t * ring.inject(g, ext) for g in b.gens]
    basis = _buchberger(tuple(gens), ext, caps)
    kept = []
    down = Ring(ring.vars, ring.field)
    for p in basis:
        if ext.order.front_degree(p.lead_key) == 0:
            kept.append(ext.inject(p, down))
    return Ideal(ring, [ring.convert(k) if ring != down else k for k in kept])


def radical_membership(f, ideal, caps=DEFAULT_CAPS):
    """Rabinowitsch: f in sqrt(I) iff 1 in I + (1 - t*f)."""
    ring = ideal.ring
    if f.ring != ring:
        raise RingMismatch("radical membership requires the ideal's ring")
    if f.is_zero():
        return True
    ext = ring.extend_front(("t_aux",))  # degrevlex on n+1 vars keeps the kernel eligible
    t = ext.var("t_aux")
    gens = [ring.inject(g, ext) for g in ideal.gens]
    gens.append(ext.one - t * ring.inject(f, ext))
    basis = _buchberger(tuple(gens), ext, caps)
    return len(basis) == 1 and basis[0].degree() == 0


def jacobian_ideal(f):
    if not f.is_homogeneous():
        raise ValueError("Jacobian ideal expects a homogeneous polynomial")
    gens = [f.derivative(v) for v in f.ring.vars]
    return Ideal(f.ring, [g for g in gens if not g.is_zero()])


def graded_piece(ideal, d, caps=DEFAULT_CAPS):
    """(dimension, basis) of the degree-d slice of a homogeneous ideal."""
    from .linalg import rref

    ring = ideal.ring
    for g in ideal.gens:
        if not g.is_homogeneous():
            raise ValueError("graded piece expects homogeneous generators")
    monos = ring.monomials_of_degree(d)
    index = {k: i for i, k in enumerate(monos)}
    fld = ring.field
    rows = []
    order = ring.order
    for g in ideal.gens:
        dg = g.degree()
        if dg > d:
            continue
        for m in ring.monomials_of_degree(d - dg):
            row = [fld.zero] * len(monos)
            for k, c in g.terms:
                row[index[order.mul(k, m)]] = c
            rows.append(row)
    if not rows:
        return 0, []
    reduced, pivots = rref(rows, fld)
    basis = []
    for i in range(len(pivots)):
        terms = [
            (monos[j], reduced[i][j])
            for j in range(len(monos))
            if not fld.is_zero(reduced[i][j])
        ]
        basis.append(Polynomial(ring, tuple(sorted(terms, reverse=True))))
    return len(pivots), basis


# ---------------------------------------------------------------------------
# JSON interchange


def ideal_to_json(ideal, include_basis=False):
    obj = {
        "ring": {
            "vars": list(ideal.ring.vars),
            "field": ideal.ring.field.descriptor(),
        },
        "gens": [str(g) for g in ideal.gens],
    }
    if include_basis and ideal.has_basis():
        obj["order"] = ideal.basis_order().name()
        obj["basis"] = [str(b) for b in ideal.basis()]
    return obj


def ideal_from_json(obj):
    ring = Ring(tuple(obj["ring"]["vars"]), field_from_descriptor(obj["ring"]["field"]))
    ideal = Ideal(ring, [ring.parse(g) for g in obj["gens"]])
    if "basis" in obj:
        order = order_from_name(obj["order"], len(ring.vars))
        basis_ring = ring.with_order(order)
        basis = tuple(basis_ring.convert(ring.parse(b)) for b in obj["basis"])
        if order == ring.order:
            basis = tuple(ring.convert(b) for b in basis)
        ideal._basis = basis
        ideal._basis_order = order
    return ideal
