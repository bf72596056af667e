"""Deterministic SVG rendering of arrangements and witness curves.

Every geometric decision (clipping, sign changes) is made in exact
arithmetic; floating point never enters.  Decimal output coordinates are
produced by exact integer scaling, the curve contour is traced from
per-scanline sign changes of the exactly evaluated polynomial, never by
root finding.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import isqrt

from .errors import UnsupportedFieldForModel
from .field import PrimeField, QuadraticField, RationalField

_APPROX_SCALE = 10**12


def _rationalize(fld, value):
    """Exact value -> Fraction approximation good to ~1e-12 (display only)."""
    if isinstance(fld, RationalField):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(fld, QuadraticField):
        a, b = value
        root = Fraction(isqrt(fld.d * _APPROX_SCALE * _APPROX_SCALE), _APPROX_SCALE)
        return (
            Fraction(int(a.numerator), int(a.denominator))
            + Fraction(int(b.numerator), int(b.denominator)) * root
        )
    raise UnsupportedFieldForModel("rendering needs a real-embeddable field")


def _dec(x, places=3):
    """Deterministic fixed-point decimal string for a Fraction."""
    q = Fraction(x)
    scaled = q * 10**places
    n = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def _check_real(fld):
    if isinstance(fld, PrimeField):
        raise UnsupportedFieldForModel("cannot render over a finite field")
    if not isinstance(fld, (RationalField, QuadraticField)):
        raise UnsupportedFieldForModel(f"cannot render over {fld.descriptor()}")


class _Frame:
    """Window-to-pixel affine map over Fractions."""

    def __init__(self, window, width, height):
        self.xmin, self.xmax, self.ymin, self.ymax = (Fraction(v) for v in window)
        if self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise ValueError("window must have positive extent")
        self.width = width
        self.height = height

    def px(self, x):
        return (x - self.xmin) / (self.xmax - self.xmin) * self.width

    def py(self, y):
        return (self.ymax - y) / (self.ymax - self.ymin) * self.height

    def contains(self, x, y):
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


def _clip_line(a, b, c, frame):
    """Endpoints of {a x + b y + c = 0} inside the window, or None."""
    hits = []
    if b:
        for x in (frame.xmin, frame.xmax):
            y = Fraction(-(c + a * x), b)
            if frame.ymin <= y <= frame.ymax:
                hits.append((x, y))
    if a:
        for y in (frame.ymin, frame.ymax):
            x = Fraction(-(c + b * y), a)
            if frame.xmin <= x <= frame.xmax:
                hits.append((x, y))
    hits = sorted(set(hits))
    if len(hits) < 2:
        return None
    return hits[0], hits[-1]


def _integerize(poly):
    """(integer coefficient pairs, is_quadratic): exact, common denominator
    cleared; quadratic coefficients become (A, B) meaning A + B*sqrt(d)."""
    fld = poly.ring.field
    quad = isinstance(fld, QuadraticField)
    dens = []
    for _, c in poly.terms:
        if quad:
            dens.append(int(c[0].denominator))
            dens.append(int(c[1].denominator))
        else:
            dens.append(int(c.denominator))
    from math import gcd

    lcm = 1
    for d in dens:
        lcm = lcm // gcd(lcm, d) * d
    coeffs = []
    for k, c in poly.terms:
        if quad:
            coeffs.append(
                (k, (int(c[0].numerator) * (lcm // int(c[0].denominator)),
                     int(c[1].numerator) * (lcm // int(c[1].denominator))))
            )
        else:
            coeffs.append((k, (int(c.numerator) * (lcm // int(c.denominator)), 0)))
    return coeffs, quad


def _sign_quad(a, b, d):
    """Exact sign of a + b*sqrt(d) for integers a, b."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0 or (a > 0) == (b > 0):
        return 1 if b > 0 else -1
    lhs = a * a
    rhs = b * b * d
    if lhs == rhs:
        return 0
    return (1 if a > 0 else -1) if lhs > rhs else (1 if b > 0 else -1)


def _curve_signs(poly, frame, nx, ny):
    """Sign grid of the homogeneous polynomial on the affine window lattice."""
    coeffs, quad = _integerize(poly)
    fld = poly.ring.field
    d = fld.d if quad else 0
    order = poly.ring.order
    deg = poly.degree()
    # lattice: x_i = xmin + i*dx, y_j = ymin + j*dy with a common denominator Q
    dx = (frame.xmax - frame.xmin) / nx
    dy = (frame.ymax - frame.ymin) / ny
    qden = (frame.xmin.denominator * dx.denominator
            * frame.ymin.denominator * dy.denominator)
    xs = [int((frame.xmin + i * dx) * qden) for i in range(nx + 1)]
    ys = [int((frame.ymin + j * dy) * qden) for j in range(ny + 1)]
    rows = []
    by_xexp = {}
    for k, c in coeffs:
        e = order.exps(k)
        by_xexp.setdefault(e[0], []).append((e[1], e[2], c))
    qpow = [qden**t for t in range(deg + 1)]
    for yj in ys:
        ypow = [yj**t for t in range(deg + 1)]
        uni = [(0, 0)] * (deg + 1)
        for e0, terms in by_xexp.items():
            accA = accB = 0
            for e1, e2, (A, B) in terms:
                w = ypow[e1] * qpow[e2]
                accA += A * w
                accB += B * w
            a0, b0 = uni[e0]
            uni[e0] = (a0 + accA, b0 + accB)
        row = []
        for xi in xs:
            accA = accB = 0
            for e0 in range(deg, -1, -1):
                accA = accA * xi + uni[e0][0]
                accB = accB * xi + uni[e0][1]
            row.append(_sign_quad(accA, accB, d) if quad else (accA > 0) - (accA < 0))
        rows.append(row)
    return rows, dx, dy


def render_svg(arr, curve=None, window=(-6, 6, -6, 6), width=720, height=720,
               grid=180):
    """SVG text: dashed line strokes, multiplicity-scaled intersection dots
    and an optional sign-change contour of a curve."""
    fld = arr.field
    _check_real(fld)
    frame = _Frame(window, width, height)
    omitted = []
    strokes = []
    for idx, line in enumerate(arr.lines):
        a, b, c = (_rationalize(fld, v) for v in line.coeffs)
        if a == 0 and b == 0:
            omitted.append({"index": idx, "reason": "line at infinity"})
            continue
        seg = _clip_line(a, b, c, frame)
        if seg is None:
            omitted.append({"index": idx, "reason": "outside window"})
            continue
        (x1, y1), (x2, y2) = seg
        strokes.append(
            f'<line x1="{_dec(frame.px(x1))}" y1="{_dec(frame.py(y1))}" '
            f'x2="{_dec(frame.px(x2))}" y2="{_dec(frame.py(y2))}"/>'
        )
    dots = []
    for p, m in arr.points().entries:
        z = p.coords[2]
        if fld.is_zero(z):
            continue
        x = _rationalize(fld, p.coords[0])
        y = _rationalize(fld, p.coords[1])
        if not frame.contains(x, y):
            continue
        r = Fraction(3, 2) + Fraction(m, 2)
        dots.append(
            f'<circle cx="{_dec(frame.px(x))}" cy="{_dec(frame.py(y))}" '
            f'r="{_dec(r, 1)}"/>'
        )
    contour = ""
    if curve is not None:
        _check_real(curve.ring.field)
        nx = ny = grid
        signs, dx, dy = _curve_signs(curve, frame, nx, ny)
        half = Fraction(1, 2)
        marks = []
        for j in range(ny + 1):
            for i in range(nx + 1):
                s = signs[j][i]
                if s == 0:
                    marks.append((Fraction(i), Fraction(j)))
                    continue
                if i < nx and signs[j][i + 1] != 0 and s != signs[j][i + 1]:
                    marks.append((i + half, Fraction(j)))
                if j < ny and signs[j + 1][i] != 0 and s != signs[j + 1][i]:
                    marks.append((Fraction(i), j + half))
        pieces = []
        for mi, mj in marks:
            x = frame.xmin + mi * dx
            y = frame.ymin + mj * dy
            pieces.append(f"M{_dec(frame.px(x))} {_dec(frame.py(y))}h1.4")
        contour = (
            '<path class="contour" stroke="#b02020" stroke-width="1.4" '
            f'fill="none" d="{"".join(pieces)}"/>'
        )
    meta = {
        "instance": arr.name,
        "field": fld.descriptor(),
        "lines": len(arr.lines),
        "drawn": len(strokes),
        "omitted": omitted,
        "window": [str(v) for v in window],
        "curve_degree": curve.degree() if curve is not None else None,
    }
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f"<desc>{json.dumps(meta, sort_keys=True)}</desc>",
            f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
            '<g stroke="#334" stroke-width="1.1" stroke-dasharray="7 4">',
            *strokes,
            "</g>",
            contour,
            '<g fill="#205080" fill-opacity="0.85">',
            *dots,
            "</g>",
            "</svg>",
        ]
    )
