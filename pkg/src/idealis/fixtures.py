"""Named arrangement fixtures.

Two 31-line simplicial arrangements (one with offsets a in {0,1,2,4}, one
with a in {0,1,2,3}), the 21-line sub-arrangement generated by rotating
seven of those lines, the classical dual Hesse arrangement, and the
rational-coefficient realization of the 31-line / 21-line pair together
with its tabulated 127 intersection points.
"""

from __future__ import annotations

from .arrangement import (
    Arrangement,
    LinearForm,
    group_generate,
    mat_inv,
    transform_line,
)
from .errors import UnsupportedFieldForModel
from .field import PrimeField, QuadraticField, rational, sqrt_in_prime_field

NAMES = ("A313", "A312", "B21", "initial10_A313", "initial10_A312", "dualHesse",
         "triangle")

# t-vectors as published for the 31-line arrangements and the 21-line one
T_VECTOR_31 = {2: 54, 3: 42, 4: 21, 5: 6, 6: 1, 8: 3}
T_VECTOR_B21 = {2: 72, 3: 40, 4: 3}

# Rational model: the 31 lines (coefficient triples of ax+by+cz)
TABLE1_LINES = (
    [(1, 1, i) for i in (0, 2, 3, 4, 5, 6, 8)]
    + [(2, -1, j) for j in (4, 6, 7, 8, 9, 10, 12)]
    + [(3, 0, k) for k in (8, 10, 11, 12, 13, 14, 16)]
    + [(1, -2, l) for l in (2, 4, 6)]
    + [(4, 1, m) for m in (14, 16, 18)]
    + [(5, -1, n) for n in (18, 20, 22)]
    + [(0, 0, 1)]
)

# Rational model: the 127 intersection points grouped by multiplicity class
TABLE2_POINTS = {
    "double": (
        (2, -2, -3), (6, -6, -1), (7, -7, -3), (13, -13, -3), (3, -1, -1), (13, -7, -3),
        (5, 1, -1), (11, 7, -3), (22, 2, -3), (2, 6, -1), (17, 7, -3), (11, 13, -3),
        (7, 2, -3), (3, 0, -1), (14, -5, -3), (16, -7, -3), (7, -1, -2), (23, -5, -6),
        (25, -7, -6), (5, 0, -1), (17, -2, -3), (8, 7, -3), (10, 5, -3), (23, 7, -6),
        (25, 5, -6), (9, 1, -2), (-22, -8, 3), (-22, -5, 6), (-26, -7, 6), (-22, 1, 6),
        (-26, -1, 6), (-2, 8, 3), (-22, 7, 6), (-26, 5, 6), (-6, -8, 1), (-13, -14, 3),
        (-13, -8, 3), (-11, 8, 3), (-2, 8, 1), (-11, 14, 3), (-8, -22, 3), (8, -11, -3),
        (8, -26, -3), (10, -7, -3), (14, 7, -3), (-16, 22, 3), (16, 11, -3), (16, 26, -3),
        (7, 0, -2), (23, -8, -6), (23, 4, -6), (25, -4, -6), (25, 8, -6), (9, 0, -2),
    ),
    "triple": (
        (4, -4, -3), (2, -2, -1), (8, -8, -3), (4, -4, -1), (14, -14, -3), (16, -16, -3),
        (3, -3, -1), (11, -11, -3), (2, 0, -1), (16, -10, -3), (8, 4, -3), (16, -4, -3),
        (6, 0, -1), (8, 10, -3), (6, 2, -1), (20, 4, -3), (4, 4, -1), (16, 8, -3),
        (8, 16, -3), (10, 14, -3), (5, 3, -1), (13, 11, -3), (8, 1, -3), (5, -2, -1),
        (16, -1, -3), (3, 2, -1), (-16, -5, 3), (-34, -8, 9), (-38, -10, 9), (-32, 2, 9),
        (-40, -2, 9), (-8, 5, 3), (-34, 10, 9), (-38, 8, 9), (-14, -16, 3), (-16, -20, 3),
        (-11, -10, 3), (-16, -14, 3), (-8, 14, 3), (-8, 20, 3), (-10, 16, 3), (-13, 10, 3),
    ),
    "quadruple": (
        (2, 1, 0), (-1, 4, 0), (1, 5, 0), (10, -10, -3), (8, -2, -3), (14, -8, -3),
        (11, -5, -3), (11, 1, -3), (13, -1, -3), (16, 2, -3), (10, 8, -3), (13, 5, -3),
        (14, 10, -3), (10, -1, -3), (4, -1, -1), (11, -2, -3), (13, -4, -3), (4, 1, -1),
        (14, 1, -3), (11, 4, -3), (13, 2, -3),
    ),
    "quintuple": (
        (10, -4, -3), (4, -2, -1), (10, 2, -3), (14, -2, -3), (14, 4, -3), (4, 2, -1),
    ),
    "sextuple": ((4, 0, -1),),
    "octuple": ((-1, 1, 0), (1, 2, 0), (0, 1, 0)),
}

# Indices into TABLE1_LINES of the 21 lines whose sqrt(3)-model counterparts
# form the 21-line sub-arrangement: in each 7-line family the offsets {0,3,5,8},
# {4,7,9,12}, {8,11,13,16} correspond to a = +-1, +-4, plus the three 3-line
# families entirely.  Validated by the (72, 40, 3) t-vector test.
B21_RATIONAL_INDICES = (0, 2, 4, 6, 7, 9, 11, 13, 14, 16, 18, 20,
                        21, 22, 23, 24, 25, 26, 27, 28, 29)


def _sqrt3_scalars(fld):
    """(u, 1) with u = sqrt(3)/2 in the given field, or raise."""
    if isinstance(fld, QuadraticField) and fld.d == 3:
        return (rational(0), rational(1, 2))
    if isinstance(fld, PrimeField):
        root = sqrt_in_prime_field(fld.p, 3)
        if root is not None:
            return root * fld.inv(2) % fld.p
    raise UnsupportedFieldForModel(
        f"sqrt(3) model needs Q(sqrt(3)) or F_p containing sqrt(3), "
        f"got {fld.descriptor()}"
    )


def rotation_matrix(fld):
    """Rotation by 60 degrees about (0:0:1)."""
    u = fld.coerce(_sqrt3_scalars(fld))
    half = fld.div(fld.one, fld.coerce(2))
    return (
        (half, fld.neg(u), fld.zero),
        (u, half, fld.zero),
        (fld.zero, fld.zero, fld.one),
    )


def reflection_matrix(fld):
    """x -> -x."""
    return (
        (fld.neg(fld.one), fld.zero, fld.zero),
        (fld.zero, fld.one, fld.zero),
        (fld.zero, fld.zero, fld.one),
    )


def symmetry_group(fld):
    """The dihedral group generated by the rotation and the reflection."""
    return group_generate(fld, [rotation_matrix(fld), reflection_matrix(fld)])


def _initial_lines(fld, a_halves, b_values):
    """Vertical lines x = +-(h * sqrt(3)/2) z and horizontals y = +-b z.

    The 31-line arrangement with offsets {0,1,2,4} uses h equal to those
    values directly; the {0,1,2,3} variant is scaled by 2 (offsets are
    whole multiples of sqrt(3)), which is what its published t-vector and
    figure require.
    """
    u = fld.coerce(_sqrt3_scalars(fld))
    lines = []
    for h in a_halves:
        if h == 0:
            lines.append(LinearForm(fld, (fld.one, fld.zero, fld.zero)))
        else:
            au = fld.mul(fld.coerce(h), u)
            lines.append(LinearForm(fld, (fld.one, fld.zero, au)))
            lines.append(LinearForm(fld, (fld.one, fld.zero, fld.neg(au))))
    for b in b_values:
        if b == 0:
            lines.append(LinearForm(fld, (fld.zero, fld.one, fld.zero)))
        else:
            bb = fld.coerce(b)
            lines.append(LinearForm(fld, (fld.zero, fld.one, bb)))
            lines.append(LinearForm(fld, (fld.zero, fld.one, fld.neg(bb))))
    return lines


def _rotated_closure(fld, lines, include_infinity):
    from .arrangement import mat_mul

    rot = rotation_matrix(fld)
    rot_inv = mat_inv(fld, rot)
    rot2_inv = mat_inv(fld, mat_mul(fld, rot, rot))
    out = list(lines)
    out += [transform_line(fld, l, rot_inv) for l in lines]
    out += [transform_line(fld, l, rot2_inv) for l in lines]
    if include_infinity:
        out.append(LinearForm(fld, (fld.zero, fld.zero, fld.one)))
    return out


def _dual_hesse(fld):
    if not isinstance(fld, PrimeField) or fld.p % 3 != 1:
        raise UnsupportedFieldForModel(
            "dual Hesse needs a primitive cube root of unity (F_p with p = 1 mod 3)"
        )
    omega = next(w for w in range(2, fld.p) if pow(w, 3, fld.p) == 1 and w != 1)
    lines = []
    for (i, j) in ((0, 1), (1, 2), (2, 0)):  # x^3-y^3, y^3-z^3, z^3-x^3
        for w in (1, omega, omega * omega % fld.p):
            coeffs = [fld.zero, fld.zero, fld.zero]
            coeffs[i] = fld.one
            coeffs[j] = fld.neg(fld.coerce(w))
            lines.append(LinearForm(fld, tuple(coeffs)))
    return lines


def build_named(name, model="sqrt3", fld=None):
    """Construct a named arrangement over the requested field.

    model="sqrt3" uses the rotation construction (needs sqrt(3) in the
    field); model="rationalTable1" uses the tabulated rational lines and
    exists for the 31-line arrangement and its 21-line sub-arrangement.
    """
    if name not in NAMES:
        raise ValueError(f"unknown arrangement {name!r}; choose from {NAMES}")
    if name == "triangle":
        fld = fld or _default_field("triangle", "rationalTable1")
        lines = [
            LinearForm(fld, (1, 0, 0)),
            LinearForm(fld, (0, 1, 0)),
            LinearForm(fld, (1, 1, -1)),
        ]
        return Arrangement(fld, lines, name="triangle")
    if name == "dualHesse":
        if fld is None:
            raise UnsupportedFieldForModel("dual Hesse requires an explicit F_p")
        return Arrangement(fld, _dual_hesse(fld), name="dualHesse")
    fld = fld or _default_field(name, model)
    if model == "rationalTable1":
        if name == "A313":
            lines = [LinearForm(fld, c) for c in TABLE1_LINES]
        elif name == "B21":
            lines = [LinearForm(fld, TABLE1_LINES[i]) for i in B21_RATIONAL_INDICES]
        else:
            raise UnsupportedFieldForModel(
                f"no rational table model for {name!r} (only A313 and B21)"
            )
        return Arrangement(fld, lines, name=f"{name}/rational")
    if model != "sqrt3":
        raise ValueError(f"unknown model {model!r}")
    if name == "A313":
        lines = _rotated_closure(fld, _initial_lines(fld, (0, 1, 2, 4), (0, 1)), True)
    elif name == "A312":
        lines = _rotated_closure(fld, _initial_lines(fld, (0, 2, 4, 6), (0, 1)), True)
    elif name == "B21":
        lines = _rotated_closure(fld, _initial_lines(fld, (1, 4), (0, 1)), False)
    elif name == "initial10_A313":
        lines = _initial_lines(fld, (0, 1, 2, 4), (0, 1))
    elif name == "initial10_A312":
        lines = _initial_lines(fld, (0, 2, 4, 6), (0, 1))
    else:  # pragma: no cover
        raise AssertionError(name)
    return Arrangement(fld, lines, name=f"{name}/{model}")


def _default_field(name, model):
    from .field import QQ

    if model == "rationalTable1" or name == "triangle":
        return QQ
    return QuadraticField(3)
