"""Projective line arrangements: intersection points with multiplicities,
t-vectors, characteristic polynomials, finite matrix groups and orbits."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import ClosureBoundExceeded, DuplicateLines, NonEssential
from .field import field_from_descriptor
from .poly import Ring


def _canonical(field, coords):
    """Scale so the first nonzero coordinate is 1."""
    coords = tuple(field.coerce(c) for c in coords)
    for c in coords:
        if not field.is_zero(c):
            inv = field.inv(c)
            return tuple(field.mul(inv, x) for x in coords)
    raise ValueError("zero vector has no projective class")


class LinearForm:
    """a*x + b*y + c*z scaled so the first nonzero coefficient is 1."""

    __slots__ = ("field", "coeffs")

    def __init__(self, fld, coeffs):
        self.field = fld
        self.coeffs = _canonical(fld, coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, LinearForm)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def sort_key(self):
        return tuple(self.field.sort_key(c) for c in self.coeffs)

    def contains(self, point):
        fld = self.field
        acc = fld.zero
        for c, x in zip(self.coeffs, point.coords):
            acc = fld.add(acc, fld.mul(c, x))
        return fld.is_zero(acc)

    def polynomial(self, ring):
        return ring.linear_form(self.coeffs)

    def __repr__(self):
        a, b, c = (self.field.format_atom(v) for v in self.coeffs)
        return f"LinearForm({a}, {b}, {c})"


class ProjectivePoint:
    """Point of P^2 scaled so the first nonzero coordinate is 1."""

    __slots__ = ("field", "coords")

    def __init__(self, fld, coords):
        self.field = fld
        self.coords = _canonical(fld, coords)

    def __eq__(self, other):
        return (
            isinstance(other, ProjectivePoint)
            and self.field == other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash(self.coords)

    def sort_key(self):
        return tuple(self.field.sort_key(c) for c in self.coords)

    def transform(self, matrix):
        fld = self.field
        new = tuple(
            fld.sum(fld.mul(matrix[i][j], self.coords[j]) for j in range(3))
            for i in range(3)
        )
        return ProjectivePoint(fld, new)

    def __repr__(self):
        return "(" + ":".join(self.field.format_atom(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class PointSet:
    """Intersection points with their line-multiplicities, canonically sorted."""

    entries: tuple  # ((ProjectivePoint, multiplicity), ...)

    def __len__(self):
        return len(self.entries)

    def points(self):
        return tuple(p for p, _ in self.entries)

    def multiplicity(self, point):
        for p, m in self.entries:
            if p == point:
                return m
        raise KeyError(point)

    def with_multiplicity(self, m):
        return tuple(p for p, mp in self.entries if mp == m)

    def t_vector(self):
        counts = {}
        for _, m in self.entries:
            counts[m] = counts.get(m, 0) + 1
        return dict(sorted(counts.items()))


class Arrangement:
    """Distinct projective lines over an exact field."""

    def __init__(self, fld, lines, name=None):
        lines = tuple(lines)
        if len(set(lines)) != len(lines):
            raise DuplicateLines("arrangement has repeated lines")
        self.field = fld
        self.lines = lines
        self.name = name
        self._points = None

    def __len__(self):
        return len(self.lines)

    def ring(self):
        return Ring(("x", "y", "z"), self.field)

    def points(self):
        if self._points is None:
            self._points = intersection_points(self)
        return self._points

    def __repr__(self):
        label = self.name or "arrangement"
        return f"<{label}: {len(self.lines)} lines over {self.field.descriptor()}>"


def line_through(fld, p, q):
    """Line joining two points (cross product)."""
    a = fld.sub(fld.mul(p[1], q[2]), fld.mul(p[2], q[1]))
    b = fld.sub(fld.mul(p[2], q[0]), fld.mul(p[0], q[2]))
    c = fld.sub(fld.mul(p[0], q[1]), fld.mul(p[1], q[0]))
    return LinearForm(fld, (a, b, c))


def intersection_points(arr):
    """All pairwise intersections with exact line-multiplicities."""
    fld = arr.field
    n = len(arr.lines)
    if n < 2:
        raise ValueError("need at least two lines")
    incidence = {}
    for i in range(n):
        ai, bi, ci = arr.lines[i].coeffs
        for j in range(i + 1, n):
            aj, bj, cj = arr.lines[j].coeffs
            x = fld.sub(fld.mul(bi, cj), fld.mul(ci, bj))
            y = fld.sub(fld.mul(ci, aj), fld.mul(ai, cj))
            z = fld.sub(fld.mul(ai, bj), fld.mul(bi, aj))
            if fld.is_zero(x) and fld.is_zero(y) and fld.is_zero(z):
                raise DuplicateLines(f"lines {i} and {j} coincide")
            p = ProjectivePoint(fld, (x, y, z))
            s = incidence.setdefault(p, set())
            s.add(i)
            s.add(j)
    entries = sorted(
        ((p, len(s)) for p, s in incidence.items()),
        key=lambda e: e[0].sort_key(),
    )
    pairs = sum(m * (m - 1) // 2 for _, m in entries)
    if pairs != n * (n - 1) // 2:
        raise AssertionError("pair-count identity violated")  # unreachable for distinct lines
    return PointSet(tuple(entries))


def t_vector(ps):
    return ps.t_vector()


def product_of_forms(arr, ring=None):
    ring = ring or arr.ring()
    result = ring.one
    for line in arr.lines:
        result = result * line.polynomial(ring)
    return result


@dataclass(frozen=True)
class CharPolyReport:
    cubic: tuple  # coefficients of t^3, t^2, t, 1
    quotient: tuple  # coefficients of t^2, t, 1 for chi/(t-1)
    splits_over_z: bool
    roots: tuple
    free_verdict: str


def char_poly(arr):
    """Central characteristic polynomial, its (t-1) quotient and the
    Terao splitting test (non-splitting certifies non-freeness)."""
    n = len(arr.lines)
    ps = arr.points()
    if any(m == n for _, m in ps.entries):
        raise NonEssential("all lines pass through one point")
    b = sum(m - 1 for _, m in ps.entries)
    c = 1 - n + b  # forced by chi(1) = 0
    cubic = (1, -n, b, -c)
    quotient = (1, 1 - n, b - n + 1)
    # (t - 1) * quotient must reproduce the cubic
    q2, q1, q0 = quotient
    assert (q2, q1 - q2, q0 - q1, -q0) == cubic
    disc = q1 * q1 - 4 * q0 * q2
    roots = ()
    splits = False
    if disc >= 0:
        s = _isqrt(disc)
        if s * s == disc and (-q1 + s) % 2 == 0:
            splits = True
            roots = tuple(sorted(((-q1 - s) // 2, (-q1 + s) // 2)))
    verdict = "potentially free (quotient splits over Z)" if splits else "not free"
    return CharPolyReport(cubic, quotient, splits, roots, verdict)


def _isqrt(n):
    import math

    return math.isqrt(n)


class MatrixGroup:
    """Finite set of invertible 3x3 matrices closed under product."""

    def __init__(self, fld, matrices):
        self.field = fld
        self.matrices = tuple(matrices)

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)


def mat_mul(fld, a, b):
    return tuple(
        tuple(
            fld.sum(fld.mul(a[i][k], b[k][j]) for k in range(3)) for j in range(3)
        )
        for i in range(3)
    )


def mat_det(fld, m):
    t1 = fld.mul(m[0][0], fld.sub(fld.mul(m[1][1], m[2][2]), fld.mul(m[1][2], m[2][1])))
    t2 = fld.mul(m[0][1], fld.sub(fld.mul(m[1][0], m[2][2]), fld.mul(m[1][2], m[2][0])))
    t3 = fld.mul(m[0][2], fld.sub(fld.mul(m[1][0], m[2][1]), fld.mul(m[1][1], m[2][0])))
    return fld.add(fld.sub(t1, t2), t3)


def mat_inv(fld, m):
    det = mat_det(fld, m)
    if fld.is_zero(det):
        raise ValueError("matrix is singular")
    inv_det = fld.inv(det)

    def cof(i, j):
        rows = [r for r in range(3) if r != i]
        cols = [c for c in range(3) if c != j]
        minor = fld.sub(
            fld.mul(m[rows[0]][cols[0]], m[rows[1]][cols[1]]),
            fld.mul(m[rows[0]][cols[1]], m[rows[1]][cols[0]]),
        )
        return fld.mul(minor, inv_det) if (i + j) % 2 == 0 else fld.neg(fld.mul(minor, inv_det))

    return tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))


def mat_identity(fld):
    return tuple(
        tuple(fld.one if i == j else fld.zero for j in range(3)) for i in range(3)
    )


def coerce_matrix(fld, rows):
    return tuple(tuple(fld.coerce(v) for v in row) for row in rows)


def group_generate(fld, generators, bound=1000):
    """Closure of the generators (with identity) under multiplication."""
    gens = [coerce_matrix(fld, g) for g in generators]
    for g in gens:
        if fld.is_zero(mat_det(fld, g)):
            raise ValueError("generators must be invertible")
    elements = {mat_identity(fld)}
    frontier = [mat_identity(fld)]
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                prod = mat_mul(fld, m, g)
                if prod not in elements:
                    elements.add(prod)
                    new.append(prod)
                    if len(elements) > bound:
                        raise ClosureBoundExceeded(
                            f"group closure exceeded {bound} elements"
                        )
        frontier = new
    ordered = sorted(
        elements, key=lambda m: tuple(fld.sort_key(v) for row in m for v in row)
    )
    return MatrixGroup(fld, ordered)


def transform_line(fld, line, matrix_inv):
    """Image of a line under the point map with the given *inverse* matrix:
    new coefficients are coeffs^T * M^{-1}."""
    coeffs = tuple(
        fld.sum(fld.mul(line.coeffs[i], matrix_inv[i][j]) for i in range(3))
        for j in range(3)
    )
    return LinearForm(fld, coeffs)


def orbits(group, ps):
    """Orbit decomposition of a PointSet; each orbit canonically sorted, and
    group elements must preserve multiplicities."""
    mult = {p: m for p, m in ps.entries}
    seen = set()
    out = []
    for p, m in ps.entries:
        if p in seen:
            continue
        orbit = {}
        for g in group.matrices:
            q = p.transform(g)
            if q not in mult:
                raise AssertionError(f"group does not permute the point set at {q!r}")
            if mult[q] != m:
                raise AssertionError("group action does not preserve multiplicity")
            orbit[q] = True
        members = sorted(orbit, key=lambda q: q.sort_key())
        if len(group) % len(members) != 0:
            raise AssertionError("orbit size does not divide group order")
        seen.update(members)
        out.append(tuple(members))
    return out


@dataclass
class RealizationReport:
    matched: int
    expected: int
    missing: tuple = ()
    extra: tuple = ()
    class_errors: tuple = ()
    t_vector_ok: bool = True
    t_vector: dict = dc_field(default_factory=dict)

    @property
    def ok(self):
        return (
            self.matched == self.expected
            and not self.missing
            and not self.extra
            and not self.class_errors
            and self.t_vector_ok
        )


_CLASS_NAMES = {2: "double", 3: "triple", 4: "quadruple", 5: "quintuple",
                6: "sextuple", 7: "septuple", 8: "octuple"}


def verify_realization(arr, table_points, expected_t):
    """Check computed intersection points against tabulated coordinates.

    `table_points` maps class name (e.g. "double") to raw coordinate triples.
    """
    fld = arr.field
    ps = arr.points()
    computed = {p: m for p, m in ps.entries}
    expected = {}
    for cls, coords in table_points.items():
        for c in coords:
            expected[ProjectivePoint(fld, c)] = cls
    missing = tuple(
        repr(p) for p in sorted(expected, key=lambda q: q.sort_key()) if p not in computed
    )
    extra = tuple(
        repr(p) for p in sorted(computed, key=lambda q: q.sort_key()) if p not in expected
    )
    class_errors = []
    matched = 0
    for p, cls in expected.items():
        if p in computed:
            matched += 1
            if _CLASS_NAMES.get(computed[p]) != cls:
                class_errors.append(
                    f"{p!r}: table says {cls}, computed multiplicity {computed[p]}"
                )
    tv = ps.t_vector()
    return RealizationReport(
        matched=matched,
        expected=len(expected),
        missing=missing,
        extra=extra,
        class_errors=tuple(class_errors),
        t_vector_ok=tv == expected_t,
        t_vector=tv,
    )


# -- JSON ------------------------------------------------------------------


def arrangement_to_json(arr):
    return {
        "field": arr.field.descriptor(),
        "lines": [
            [arr.field.format_atom(c) for c in line.coeffs] for line in arr.lines
        ],
    }


def arrangement_from_json(obj):
    fld = field_from_descriptor(obj["field"])
    lines = [
        LinearForm(fld, tuple(fld.parse_atom(c) for c in row)) for row in obj["lines"]
    ]
    return Arrangement(fld, lines)
