"""Invariant theory of the arrangement's symmetry group: Molien dimension
counts with a Reynolds-operator oracle, the fixed generator triple of the
invariant ring, equivariant interpolation of the degree-12 and degree-10
curves, and the singularity/genus analysis of those curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrangement import ProjectivePoint, mat_det
from .errors import (
    BadCharacteristic,
    NonOrdinaryUnsupported,
    PrimeTooLarge,
)
from .field import PrimeField
from .groebner import jacobian_ideal, radical_membership
from .linalg import kernel_basis, rank
from .poly import Ring

INVARIANT_WEIGHTS = (1, 2, 6)

SCAN_PRIME_LIMIT = 4096


def invariant_generators(ring):
    """The generator triple of the invariant ring: z, x^2+y^2 and the
    degree-6 invariant 11x^6+15x^4y^2+45x^2y^4+9y^6."""
    x, y, z = (ring.var(v) for v in ring.vars)
    f1 = z
    f2 = x * x + y * y
    f3 = (
        (x ** 6).scale(11)
        + ((x ** 4) * (y ** 2)).scale(15)
        + ((x ** 2) * (y ** 4)).scale(45)
        + (y ** 6).scale(9)
    )
    return (f1, f2, f3)


def _charpoly_fraction(fld, matrix, d):
    """Power series of 1/det(Id - t*M) to order d, as field-element coeffs."""
    # det(Id - tM) = 1 + c1 t + c2 t^2 + c3 t^3 for 3x3 M
    tr = fld.sum(matrix[i][i] for i in range(3))
    # sum of principal 2x2 minors
    minors = fld.zero
    for i in range(3):
        for j in range(i + 1, 3):
            minors = fld.add(
                minors,
                fld.sub(
                    fld.mul(matrix[i][i], matrix[j][j]),
                    fld.mul(matrix[i][j], matrix[j][i]),
                ),
            )
    det = mat_det(fld, matrix)
    c = [fld.one, fld.neg(tr), minors, fld.neg(det)]
    # invert 1 + c1 t + c2 t^2 + c3 t^3 mod t^(d+1)
    inv = [fld.zero] * (d + 1)
    inv[0] = fld.one
    for k in range(1, d + 1):
        acc = fld.zero
        for i in range(1, min(3, k) + 1):
            acc = fld.add(acc, fld.mul(c[i], inv[k - i]))
        inv[k] = fld.neg(acc)
    return inv


def molien_dimension(group, d):
    """Dimension of the degree-d invariants: t^d coefficient of the averaged
    series (1/|G|) sum over g of 1/det(Id - t g)."""
    fld = group.field
    if fld.char and len(group) % fld.char == 0:
        raise BadCharacteristic("group order divisible by the characteristic")
    total = [fld.zero] * (d + 1)
    for m in group.matrices:
        series = _charpoly_fraction(fld, m, d)
        total = [fld.add(a, b) for a, b in zip(total, series)]
    coeff = fld.div(total[d], fld.coerce(len(group)))
    return _as_nonneg_int(fld, coeff)


def _as_nonneg_int(fld, value):
    for n in range(0, 100000):
        if value == fld.coerce(n):
            return n
    raise AssertionError("Molien coefficient is not a small non-negative integer")


def reynolds_fixed_dim(group, d, ring=None):
    """Rank of the averaging projector on the degree-d monomial basis.

    Independent oracle for molien_dimension: exact linear algebra on the
    full C(d+2,2)-dimensional space.
    """
    fld = group.field
    if fld.char and len(group) % fld.char == 0:
        raise BadCharacteristic("group order divisible by the characteristic")
    ring = ring or Ring(("x", "y", "z"), fld)
    monos = ring.monomials_of_degree(d)
    index = {k: i for i, k in enumerate(monos)}
    n = len(monos)
    proj = [[fld.zero] * n for _ in range(n)]
    for m in group.matrices:
        for col, key in enumerate(monos):
            image = ring.monomial(ring.order.exps(key)).compose_linear(m)
            for k, c in image.terms:
                row = index[k]
                proj[row][col] = fld.add(proj[row][col], c)
    inv_order = fld.inv(fld.coerce(len(group)))
    proj = [[fld.mul(v, inv_order) for v in row] for row in proj]
    return rank(proj, fld)


def invariant_monomials(d, weights=INVARIANT_WEIGHTS):
    """Exponent triples (a, b, c) with a*w1 + b*w2 + c*w3 = d, ordered by
    (c, b, a) descending."""
    w1, w2, w3 = weights
    out = []
    for c in range(d // w3, -1, -1):
        for b in range((d - c * w3) // w2, -1, -1):
            rem = d - c * w3 - b * w2
            if rem % w1 == 0:
                out.append((rem // w1, b, c))
    out.sort(key=lambda t: (t[2], t[1], t[0]), reverse=True)
    return out


def is_invariant(f, group):
    return all(f.compose_linear(m) == f for m in group.matrices)


@dataclass
class InvariantBasis:
    degree: int
    exponents: tuple  # ((a, b, c), ...)
    expansions: tuple  # Polynomial for each triple
    ring: object

    def __len__(self):
        return len(self.exponents)


def invariant_basis(ring, d):
    """Expanded products f1^a f2^b f3^c of total degree d."""
    f1, f2, f3 = invariant_generators(ring)
    triples = invariant_monomials(d)
    expansions = []
    for a, b, c in triples:
        poly = (f1 ** a) * (f2 ** b) * (f3 ** c)
        expansions.append(poly)
    return InvariantBasis(d, tuple(triples), tuple(expansions), ring)


@dataclass
class InvariantCurve:
    degree: int
    coefficients: tuple  # coefficients over the invariant basis
    exponents: tuple
    polynomial: object
    provenance: dict

    def coefficient_map(self):
        return dict(zip(self.exponents, self.coefficients))


def _derivative_rows(basis, point):
    """Condition rows for double vanishing at `point`: value plus the two
    partials complementary to the first nonzero coordinate (the third is
    dependent through the Euler relation)."""
    ring = basis.ring
    fld = ring.field
    coords = point.coords
    skip = next(i for i, c in enumerate(coords) if not fld.is_zero(c))
    rows = []
    rows.append([poly.evaluate(coords) for poly in basis.expansions])
    for i, v in enumerate(ring.vars):
        if i == skip:
            continue
        rows.append([poly.derivative(v).evaluate(coords) for poly in basis.expansions])
    return rows


def interpolate_curve(basis, simple, double, provenance=None):
    """Exact kernel of the vanishing conditions on the invariant basis.

    `simple`: points where the curve must vanish; `double`: points where it
    must vanish to order 2.  Returns a list of InvariantCurve (kernel
    vectors normalized to leading coefficient 1); empty list when no curve
    satisfies the conditions.
    """
    ring = basis.ring
    fld = ring.field
    rows = []
    for p in simple:
        rows.append([poly.evaluate(p.coords) for poly in basis.expansions])
    for p in double:
        rows.extend(_derivative_rows(basis, p))
    vectors = kernel_basis(rows, len(basis), fld)
    curves = []
    for vec in vectors:
        lead = next(v for v in vec if not fld.is_zero(v))
        inv = fld.inv(lead)
        vec = tuple(fld.mul(inv, v) for v in vec)
        poly = ring.zero
        for coeff, expansion in zip(vec, basis.expansions):
            if not fld.is_zero(coeff):
                poly = poly + expansion.scale(coeff)
        curves.append(
            InvariantCurve(
                degree=basis.degree,
                coefficients=vec,
                exponents=basis.exponents,
                polynomial=poly,
                provenance=dict(provenance or {},
                                simple=len(simple), double=len(double)),
            )
        )
    return curves


# ---------------------------------------------------------------------------
# singularity analysis


def singular_points_scan(f, p, chunk=1 << 18):
    """Brute-force singular locus of a homogeneous curve over F_p: all points
    of P^2(F_p) where f and its three partials vanish.  Oracle for the
    symbolic emptiness check."""
    if p > SCAN_PRIME_LIMIT:
        raise PrimeTooLarge(f"scan limited to p <= {SCAN_PRIME_LIMIT}")
    ring = f.ring
    if not isinstance(ring.field, PrimeField) or ring.field.p != p:
        raise ValueError("polynomial must live over F_p for the scan")
    if not f.is_homogeneous():
        raise ValueError("scan expects a homogeneous polynomial")
    polys = [f] + [f.derivative(v) for v in ring.vars]
    hits = []

    def scan_block(xs, ys, zs):
        good = np.ones(len(xs), dtype=bool)
        for poly in polys:
            vals = _eval_mod(poly, xs, ys, zs, p)
            good &= vals == 0
            if not good.any():
                return
        for x0, y0, z0 in zip(xs[good], ys[good], zs[good]):
            hits.append(
                ProjectivePoint(ring.field, (int(x0), int(y0), int(z0)))
            )

    # charts: (1 : y : z), (0 : 1 : z), (0 : 0 : 1)
    total = p * p
    ys_all = np.arange(total, dtype=np.int64) // p
    zs_all = np.arange(total, dtype=np.int64) % p
    for start in range(0, total, chunk):
        sl = slice(start, min(start + chunk, total))
        ys = ys_all[sl]
        zs = zs_all[sl]
        scan_block(np.ones(len(ys), dtype=np.int64), ys, zs)
    zs = np.arange(p, dtype=np.int64)
    scan_block(np.zeros(p, dtype=np.int64), np.ones(p, dtype=np.int64), zs)
    scan_block(
        np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64), np.ones(1, dtype=np.int64)
    )
    hits.sort(key=lambda q: q.sort_key())
    return hits


def _eval_mod(poly, xs, ys, zs, p):
    order = poly.ring.order
    max_e = [0, 0, 0]
    for k, _ in poly.terms:
        for i, e in enumerate(order.exps(k)):
            max_e[i] = max(max_e[i], e)
    pows = []
    for arr, top in zip((xs, ys, zs), max_e):
        cache = [np.ones(len(arr), dtype=np.int64)]
        for _ in range(top):
            cache.append(cache[-1] * arr % p)
        pows.append(cache)
    acc = np.zeros(len(xs), dtype=np.int64)
    for k, c in poly.terms:
        e = order.exps(k)
        term = pows[0][e[0]] * pows[1][e[1]] % p
        term = term * pows[2][e[2]] % p
        acc = (acc + c * term) % p
    return acc


def hessian_rank_at(f, point):
    """Rank of the 3x3 Hessian at a point; 2 certifies an ordinary node."""
    ring = f.ring
    fld = ring.field
    rows = []
    for v in ring.vars:
        dv = f.derivative(v)
        rows.append([dv.derivative(w).evaluate(point.coords) for w in ring.vars])
    return rank(rows, fld)


def vanishing_order_at(f, point, cap=6):
    """Exact order of vanishing at a point (capped)."""
    from .poly import vanishing_order_at_least

    m = 0
    while m < cap and vanishing_order_at_least(f, point, m + 1):
        m += 1
    return m


def emptiness_of_singular_locus(f, caps=None):
    """True iff the projective singular locus is empty: each variable lies
    in the radical of the Jacobian ideal."""
    from .groebner import DEFAULT_CAPS

    caps = caps or DEFAULT_CAPS
    jac = jacobian_ideal(f)
    ring = f.ring
    return all(
        radical_membership(ring.var(v), jac, caps=caps) for v in ring.vars
    )


def genus_nodal(d, singularities=()):
    """Genus of a degree-d plane curve whose singular points are all
    ordinary: binom(d-1, 2) - sum of binom(m_i, 2)."""
    for mult, ordinary in singularities:
        if not ordinary:
            raise NonOrdinaryUnsupported(
                "delta invariants of non-ordinary singularities are out of scope"
            )
        if mult < 2:
            raise ValueError("singular point multiplicity must be >= 2")
    g = (d - 1) * (d - 2) // 2
    for mult, _ in singularities:
        g -= mult * (mult - 1) // 2
    return g
