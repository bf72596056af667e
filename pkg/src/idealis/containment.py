"""Fat-point schemes, symbolic and ordinary powers, containment verdicts
and the explicit witness elements (21 lines times a higher-degree curve).

The interpolation strategy builds the ideal degree by degree from exact
kernels of evaluation-with-derivatives matrices; the intersection strategy
is the small-scheme oracle via the t-trick.  Containment verdicts over F_p
are labeled by their epistemic weight: a nonzero normal form of a
Q-defined element is a proof over Q once the prime avoids all input
denominators, while a zero normal form is only good-prime evidence.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .arrangement import ProjectivePoint
from .errors import BadCharacteristic, ResourceLimit
from .field import PrimeField, QQ, QuadraticField
from .groebner import (
    DEFAULT_CAPS,
    Ideal,
    groebner_basis,
    ideal_power,
    ideal_intersection,
    normal_form,
)
from .linalg import kernel_basis, kernel_mod
from .poly import Polynomial, Ring, derivative_layers, vanishing_order_at_least


@dataclass(frozen=True)
class FatPoint:
    point: ProjectivePoint
    multiplicity: int


class FatPointScheme:
    """Distinct points with assigned multiplicities >= 1."""

    def __init__(self, fat_points):
        pts = tuple(fat_points)
        seen = set()
        for fp in pts:
            if fp.multiplicity < 1:
                raise ValueError("multiplicities must be >= 1")
            if fp.point in seen:
                raise ValueError(f"duplicate point {fp.point!r}")
            seen.add(fp.point)
        self.points = tuple(
            sorted(pts, key=lambda fp: fp.point.sort_key())
        )

    def __len__(self):
        return len(self.points)

    @property
    def condition_count(self):
        return sum(m * (m + 1) // 2 for m in self.multiplicities())

    def multiplicities(self):
        return tuple(fp.multiplicity for fp in self.points)

    @classmethod
    def uniform(cls, points, m):
        return cls(FatPoint(p, m) for p in points)


def point_ideal(point, ring):
    """Two independent linear forms through the point: the 2x2-minor forms
    complementary to its first nonzero coordinate."""
    fld = ring.field
    coords = point.coords
    i0 = next(i for i, c in enumerate(coords) if not fld.is_zero(c))
    gens = []
    for j in range(3):
        if j == i0:
            continue
        coeffs = [fld.zero, fld.zero, fld.zero]
        coeffs[j] = coords[i0]
        coeffs[i0] = fld.neg(coords[j])
        gens.append(ring.linear_form(coeffs).monic())
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# interpolation machinery


def _chart_pair(fld, coords):
    i0 = next(i for i, c in enumerate(coords) if not fld.is_zero(c))
    return [j for j in range(3) if j != i0]


def _condition_rows_generic(scheme, ring, d):
    """One row per derivative condition, columns indexed by the degree-d
    monomials in ring order."""
    fld = ring.field
    monos = ring.monomials_of_degree(d)
    exps = [ring.order.exps(k) for k in monos]
    rows = []
    for fp in scheme.points:
        coords = fp.point.coords
        chart = _chart_pair(fld, coords)
        powers = _power_table(fld, coords, d)
        for a in range(fp.multiplicity):
            for b in range(fp.multiplicity - a):
                row = []
                for e in exps:
                    row.append(_derivative_value(fld, e, chart, a, b, powers))
                rows.append(row)
    return rows, monos


def _power_table(fld, coords, d):
    table = []
    for c in coords:
        cache = [fld.one]
        for _ in range(d):
            cache.append(fld.mul(cache[-1], c))
        table.append(cache)
    return table


def _derivative_value(fld, e, chart, a, b, powers):
    v1, v2 = chart
    e = list(e)
    if e[v1] < a or e[v2] < b:
        return fld.zero
    factor = 1
    for k in range(a):
        factor *= e[v1] - k
    for k in range(b):
        factor *= e[v2] - k
    e[v1] -= a
    e[v2] -= b
    c = fld.coerce(factor)
    if fld.is_zero(c):
        return fld.zero
    val = fld.mul(powers[0][e[0]], fld.mul(powers[1][e[1]], powers[2][e[2]]))
    return fld.mul(c, val)


def _condition_rows_mod(scheme, ring, d):
    """Vectorized condition matrix over F_p (int64)."""
    p = ring.field.p
    monos = ring.monomials_of_degree(d)
    exps = np.array([ring.order.exps(k) for k in monos], dtype=np.int64)
    ncols = len(monos)
    rows = []
    for fp in scheme.points:
        coords = [int(c) for c in fp.point.coords]
        chart = _chart_pair(ring.field, fp.point.coords)
        pows = []
        for c in coords:
            cache = np.ones(d + 1, dtype=np.int64)
            for k in range(1, d + 1):
                cache[k] = cache[k - 1] * c % p
            pows.append(cache)
        for a in range(fp.multiplicity):
            for b in range(fp.multiplicity - a):
                v1, v2 = chart
                e = exps.copy()
                factor = np.ones(ncols, dtype=np.int64)
                for k in range(a):
                    factor = factor * np.maximum(e[:, v1] - k, 0) % p
                for k in range(b):
                    factor = factor * np.maximum(e[:, v2] - k, 0) % p
                ok = (exps[:, v1] >= a) & (exps[:, v2] >= b)
                e[:, v1] = np.maximum(e[:, v1] - a, 0)
                e[:, v2] = np.maximum(e[:, v2] - b, 0)
                vals = pows[0][e[:, 0]] * pows[1][e[:, 1]] % p
                vals = vals * pows[2][e[:, 2]] % p
                row = np.where(ok, vals * factor % p, 0)
                rows.append(row)
    return (np.array(rows, dtype=np.int64) if rows else
            np.zeros((0, ncols), dtype=np.int64)), monos


def _kernel_polys(scheme, ring, d):
    """Exact basis of the degree-d forms satisfying all conditions."""
    fld = ring.field
    if isinstance(fld, PrimeField) and fld.p < (1 << 31):
        if any(fp.multiplicity > fld.p for fp in scheme.points):
            raise BadCharacteristic("multiplicity exceeds the characteristic")
        mat, monos = _condition_rows_mod(scheme, ring, d)
        basis = kernel_mod(mat, fld.p)
        out = []
        for vec in basis:
            terms = [
                (monos[i], int(vec[i])) for i in range(len(monos)) if vec[i]
            ]
            out.append(Polynomial(ring, tuple(sorted(terms, reverse=True))))
        return out
    rows, monos = _condition_rows_generic(scheme, ring, d)
    basis = kernel_basis(rows, len(monos), fld)
    out = []
    for vec in basis:
        terms = [
            (monos[i], vec[i]) for i in range(len(monos)) if not fld.is_zero(vec[i])
        ]
        out.append(Polynomial(ring, tuple(sorted(terms, reverse=True))))
    return out


def graded_kernel(scheme, ring, d):
    """Degree-d piece of the fat-point ideal, as polynomials."""
    return _kernel_polys(scheme, ring, d)


class _Echelon:
    """Incremental row echelon used to pick new minimal generators."""

    def __init__(self, fld, p=None):
        self.fld = fld
        self.p = p
        self.rows = {}  # pivot index -> normalized vector

    def reduce(self, vec):
        if self.p is not None:
            v = np.array(vec, dtype=np.int64) % self.p
            for piv in sorted(self.rows):
                if v[piv]:
                    v = (v - v[piv] * self.rows[piv]) % self.p
            nz = np.nonzero(v)[0]
            return None if nz.size == 0 else (int(nz[0]), v)
        fld = self.fld
        v = list(vec)
        for piv in sorted(self.rows):
            if not fld.is_zero(v[piv]):
                factor = v[piv]
                row = self.rows[piv]
                v = [fld.sub(v[i], fld.mul(factor, row[i])) for i in range(len(v))]
        for i, val in enumerate(v):
            if not fld.is_zero(val):
                return i, v
        return None

    def add(self, vec):
        hit = self.reduce(vec)
        if hit is None:
            return False
        piv, v = hit
        if self.p is not None:
            inv = pow(int(v[piv]), self.p - 2, self.p)
            self.rows[piv] = v * inv % self.p
        else:
            inv = self.fld.inv(v[piv])
            self.rows[piv] = [self.fld.mul(inv, x) for x in v]
        return True


def _poly_vec(poly, mono_index, length, modp):
    if modp is not None:
        v = np.zeros(length, dtype=np.int64)
        for k, c in poly.terms:
            v[mono_index[k]] = int(c)
        return v
    v = [poly.ring.field.zero] * length
    for k, c in poly.terms:
        v[mono_index[k]] = c
    return v


def _interpolation_ideal(scheme, ring, caps, report=None):
    """Degree-by-degree minimal-generator hunt with the two-stable-degrees
    stop rule (heuristic; recorded in the report)."""
    fld = ring.field
    modp = fld.p if isinstance(fld, PrimeField) and fld.p < (1 << 31) else None
    conds = scheme.condition_count
    gens = []
    stable = 0
    history = []
    d = 0
    max_degree = sum(scheme.multiplicities()) + 2
    while True:
        d += 1
        if d > max_degree:
            raise ResourceLimit(
                f"interpolation passed degree {max_degree} without stabilizing",
                {"degrees": history},
            )
        kern = _kernel_polys(scheme, ring, d)
        dim = len(kern)
        expected = (d + 2) * (d + 1) // 2 - conds
        monos = ring.monomials_of_degree(d)
        mono_index = {k: i for i, k in enumerate(monos)}
        ech = _Echelon(fld, modp)
        for g in gens:
            dg = g.degree()
            if dg > d:
                continue
            for m in ring.monomials_of_degree(d - dg):
                mono = Polynomial(ring, ((m, fld.one),))
                ech.add(_poly_vec(g * mono, mono_index, len(monos), modp))
        new = []
        for vec_poly in kern:
            if ech.add(_poly_vec(vec_poly, mono_index, len(monos), modp)):
                new.append(vec_poly.monic())
        gens.extend(new)
        history.append({"degree": d, "dim": dim, "expected": expected,
                        "new_generators": len(new)})
        if dim == expected and not new:
            stable += 1
            if stable >= 2:
                break
        else:
            stable = 0
    if report is not None:
        report["strategy"] = "interpolation"
        report["stop_rule"] = "two stable degrees at the Hilbert value, no new generators"
        report["degrees"] = history
    return Ideal(ring, gens)


def _intersection_ideal(scheme, ring, caps, report=None):
    acc = None
    for fp in scheme.points:
        piece = point_ideal(fp.point, ring)
        if fp.multiplicity > 1:
            piece = ideal_power(piece, fp.multiplicity)
        acc = piece if acc is None else ideal_intersection(acc, piece, caps=caps)
    if report is not None:
        report["strategy"] = "intersection"
    return acc if acc is not None else Ideal(ring, [])


def fat_points_ideal(scheme, ring, strategy="auto", caps=DEFAULT_CAPS, report=None):
    """Ideal of the fat-point scheme.

    strategy: "interpolation" (default for >= 10 points), "intersection"
    (the oracle for small schemes), or "auto".
    """
    if strategy == "auto":
        strategy = "interpolation" if len(scheme) >= 10 else "intersection"
    if strategy == "interpolation":
        return _interpolation_ideal(scheme, ring, caps, report=report)
    if strategy == "intersection":
        return _intersection_ideal(scheme, ring, caps, report=report)
    raise ValueError(f"unknown strategy {strategy!r}")


def symbolic_power(points, m, ring, strategy="auto", caps=DEFAULT_CAPS, report=None):
    """m-th symbolic power of the ideal of the given (reduced) points."""
    pts = points.points() if hasattr(points, "points") else tuple(points)
    scheme = FatPointScheme.uniform(pts, m)
    return fat_points_ideal(scheme, ring, strategy=strategy, caps=caps, report=report)


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class ContainmentVerdict:
    instance: str
    field: str
    prime: object
    m: int
    r: int
    holds: object  # True / False / None (undecided)
    certificate: dict
    generator_counts: dict
    degrees: dict
    wall_time: float
    resource_stats: dict
    labels: tuple = ()

    def to_json(self):
        return {
            "instance": self.instance,
            "field": self.field,
            "prime": self.prime,
            "m": self.m,
            "r": self.r,
            "holds": self.holds,
            "certificate": self.certificate,
            "generator_counts": self.generator_counts,
            "degrees": self.degrees,
            "wall_time": self.wall_time,
            "resource_stats": self.resource_stats,
            "labels": list(self.labels),
        }


def _digest(poly):
    return hashlib.sha256(str(poly).encode()).hexdigest()[:16]


def _epistemic_labels(fld, holds):
    if not isinstance(fld, PrimeField):
        return ("exact over the coefficient field",)
    if holds is False:
        return (
            "non-containment: proof mod p (a proof over Q when the instance "
            "is Q-defined and p avoids its denominators)",
        )
    if holds is True:
        return ("containment: evidence (good-prime heuristic)",)
    return ("undecided",)


def check_containment(points, m, r, ring, strategy="auto", caps=DEFAULT_CAPS,
                      instance="", progress=None):
    """Does I^(m) of the given points sit inside I^r?  Full Groebner check."""
    t0 = time.time()
    fld = ring.field
    stats = {}
    report = {}
    try:
        base = symbolic_power(points, 1, ring, strategy=strategy, caps=caps)
        power = ideal_power(base, r)
        groebner_basis(power, caps=caps, progress=progress)
        sym = symbolic_power(points, m, ring, strategy=strategy, caps=caps,
                             report=report)
        holds = True
        certificate = {"status": "all generators reduced to zero"}
        order = ring.order
        gens = sorted(sym.gens, key=lambda g: (g.degree(), g.lead_key))
        for idx, g in enumerate(gens):
            nf = normal_form(g, power)
            if not nf.is_zero():
                holds = False
                certificate = {
                    "status": "non-containment witness",
                    "generator_index": idx,
                    "generator_degree": g.degree(),
                    "normal_form_terms": nf.num_terms(),
                    "normal_form_lead": dict(
                        zip(ring.vars, order.exps(nf.lead_key))
                    ),
                    "normal_form_digest": _digest(nf),
                }
                break
        gen_counts = {
            "base": len(base.gens),
            f"power_r{r}": len(power.gens),
            f"symbolic_m{m}": len(sym.gens),
            "power_basis": len(power.basis()),
        }
        degrees = {
            "base_max": max((g.degree() for g in base.gens), default=0),
            "symbolic_max": max((g.degree() for g in sym.gens), default=0),
            "power_basis_max": max((b.degree() for b in power.basis()), default=0),
        }
    except ResourceLimit as exc:
        return ContainmentVerdict(
            instance=instance,
            field=fld.descriptor(),
            prime=getattr(fld, "p", None),
            m=m,
            r=r,
            holds=None,
            certificate={"status": "undecided at given resources",
                         "reason": str(exc)},
            generator_counts={},
            degrees={},
            wall_time=time.time() - t0,
            resource_stats=dict(exc.stats, **caps.as_dict()),
            labels=_epistemic_labels(fld, None),
        )
    if report.get("strategy") == "interpolation":
        stats["stop_rule"] = report.get("stop_rule")
    stats.update(caps.as_dict())
    return ContainmentVerdict(
        instance=instance,
        field=fld.descriptor(),
        prime=getattr(fld, "p", None),
        m=m,
        r=r,
        holds=holds,
        certificate=certificate,
        generator_counts=gen_counts,
        degrees=degrees,
        wall_time=time.time() - t0,
        resource_stats=stats,
        labels=_epistemic_labels(fld, holds),
    )


@dataclass
class WitnessReport:
    in_symbolic: bool
    failing_points: tuple
    not_in_power: object  # True / False / None
    normal_form_digest: str
    normal_form_terms: int
    wall_time: float
    labels: tuple = ()


def witness_check(f, points, m, r, ring=None, strategy="auto", caps=DEFAULT_CAPS,
                  skip_power=False, progress=None):
    """(a) pointwise order->=m membership of f in I^(m) (no Groebner);
    (b) nonzero normal form of f against GB(I^r)."""
    t0 = time.time()
    ring = ring or f.ring
    if not f.is_homogeneous():
        raise ValueError("witness must be homogeneous")
    pts = points.points() if hasattr(points, "points") else tuple(points)
    layers = derivative_layers(f, m - 1)
    fld = f.ring.field
    failing = []
    for p in pts:
        for layer in layers:
            if any(not fld.is_zero(g.evaluate(p.coords)) for g in layer):
                failing.append(p)
                break
    in_symbolic = not failing
    not_in_power = None
    digest = ""
    nf_terms = 0
    if not skip_power:
        try:
            base = symbolic_power(pts, 1, ring, strategy=strategy, caps=caps)
            power = ideal_power(base, r)
            groebner_basis(power, caps=caps, progress=progress)
            nf = normal_form(ring.convert(f) if f.ring != ring else f, power)
            not_in_power = not nf.is_zero()
            digest = _digest(nf)
            nf_terms = nf.num_terms()
        except ResourceLimit:
            not_in_power = None
    labels = []
    if in_symbolic:
        labels.append(f"order >= {m} verified pointwise at {len(pts)} points")
    if not_in_power:
        labels.extend(_epistemic_labels(fld, False))
    elif not_in_power is False:
        labels.append("witness reduced to zero: no certificate")
    return WitnessReport(
        in_symbolic=in_symbolic,
        failing_points=tuple(repr(p) for p in failing[:10]),
        not_in_power=not_in_power,
        normal_form_digest=digest,
        normal_form_terms=nf_terms,
        wall_time=time.time() - t0,
        labels=tuple(labels),
    )


# ---------------------------------------------------------------------------
# witnesses


def _rational_curve(name):
    """Rational-model curve: degree-12 with 12 double + 72 simple conditions
    for the 31-line witness, degree-10 with the 72 simple conditions for the
    21-line witness.  Unique up to scale (kernel dimension 1)."""
    from .errors import EmptyKernel
    from .fixtures import build_named

    ring = Ring(("x", "y", "z"), QQ)
    a313 = build_named("A313", model="rationalTable1")
    b21 = build_named("B21", model="rationalTable1")
    doubles = b21.points().with_multiplicity(2)
    complement = sorted(
        set(a313.points().points()) - set(b21.points().points()),
        key=lambda p: p.sort_key(),
    )
    if name == "A313":
        scheme = FatPointScheme(
            [FatPoint(p, 1) for p in doubles] + [FatPoint(p, 2) for p in complement]
        )
        degree = 12
    elif name == "B21":
        scheme = FatPointScheme([FatPoint(p, 1) for p in doubles])
        degree = 10
    else:
        raise ValueError(name)
    kern = graded_kernel(scheme, ring, degree)
    if len(kern) != 1:
        raise EmptyKernel(
            f"expected a unique degree-{degree} curve, kernel dimension {len(kern)}"
        )
    return _integer_normalized(kern[0].monic())


def _integer_normalized(poly):
    """Clear denominators and divide by the content (sign of the lead kept)."""
    from math import gcd

    dens = [int(c.denominator) for _, c in poly.terms]
    nums = [int(c.numerator) for _, c in poly.terms]
    lcm = 1
    for d in dens:
        lcm = lcm // gcd(lcm, d) * d
    scaled = [n * (lcm // d) for n, d in zip(nums, dens)]
    g = 0
    for s in scaled:
        g = gcd(g, s)
    if g:
        scaled = [s // g for s in scaled]
    fld = poly.ring.field
    return Polynomial(
        poly.ring,
        tuple((k, fld.coerce(s)) for (k, _), s in zip(poly.terms, scaled)),
    )


def build_witness(name, fld=None, model=None):
    """Product of the 21 sub-arrangement lines with the matching curve:
    degree 33 for the 31-line arrangement, degree 31 for the 21-line one."""
    from .fixtures import build_named, symmetry_group
    from .arrangement import orbits, PointSet, product_of_forms
    from .invariant import invariant_basis, interpolate_curve
    from .errors import EmptyKernel

    if name not in ("A313", "B21"):
        raise ValueError("witnesses exist for the 31-line and 21-line instances")
    fld = fld or QQ
    if model is None:
        model = "sqrt3" if isinstance(fld, QuadraticField) else "rational"
    if model == "rational":
        curve = _rational_curve(name)
        ring = curve.ring
        b21 = build_named("B21", model="rationalTable1")
        lines = product_of_forms(b21, ring)
        witness = _integer_normalized(lines * curve)
    else:
        ring = Ring(("x", "y", "z"), fld)
        b21 = build_named("B21", fld=fld)
        group = symmetry_group(fld)
        doubles = b21.points().with_multiplicity(2)
        orbs = orbits(group, PointSet(tuple((p, 2) for p in doubles)))
        reps = [o[0] for o in orbs]
        if name == "A313":
            a313 = build_named("A313", fld=fld)
            complement = sorted(
                set(a313.points().points()) - set(b21.points().points()),
                key=lambda p: p.sort_key(),
            )
            basis = invariant_basis(ring, 12)
            curves = interpolate_curve(basis, reps, [complement[0]])
        else:
            basis = invariant_basis(ring, 10)
            curves = interpolate_curve(basis, reps, [])
        if len(curves) != 1:
            raise EmptyKernel(f"kernel dimension {len(curves)}, expected 1")
        witness = product_of_forms(b21, ring) * curves[0].polynomial
    if isinstance(fld, PrimeField) and not isinstance(witness.ring.field, PrimeField):
        witness = witness.specialize(fld.p)
    return witness
