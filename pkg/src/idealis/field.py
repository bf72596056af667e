"""Exact coefficient fields: Q, Q(sqrt(d)) and F_p.

Elements are plain immutable Python values (Fraction/mpq for Q, an
``(a, b)`` pair meaning ``a + b*sqrt(d)`` for quadratic fields, an int
residue for F_p).  All arithmetic goes through a Field object fixed per
ring, which keeps the per-element overhead at zero and makes every value
hashable and canonical by construction.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import BadPrime, DivisionByZero, FieldMismatch, ParseError

try:  # gmpy2 gives a large constant-factor speedup on rational runs
    from gmpy2 import mpq as _ratio
except ImportError:  # pragma: no cover - gmpy2 is an optional extra
    _ratio = Fraction

_RAT_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def rational(num, den=1):
    """Canonical rational value (lowest terms, positive denominator)."""
    if den == 0:
        raise DivisionByZero("zero denominator")
    return _ratio(num, den)


def _as_rational(v):
    if isinstance(v, int):
        return rational(v)
    return rational(v.numerator, v.denominator)


class Field:
    """Common interface; subclasses fix the arithmetic."""

    char = 0

    def coerce(self, value):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        if self.is_zero(b):
            raise DivisionByZero("division by zero")
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        raise NotImplementedError

    def pow(self, a, n):
        result = self.one
        base = a
        k = n
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    # -- ordering (real embeddings only) -------------------------------
    def sign(self, a):
        raise FieldMismatch(f"{self.descriptor()} is not an ordered field")

    def sort_key(self, a):
        raise NotImplementedError

    # -- text -----------------------------------------------------------
    def descriptor(self):
        raise NotImplementedError

    def parse_atom(self, text):
        raise NotImplementedError

    def format_atom(self, a):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()

    def __repr__(self):
        return f"Field({self.descriptor()!r})"


class RationalField(Field):
    char = 0

    def __init__(self):
        self.zero = rational(0)
        self.one = rational(1)

    def coerce(self, value):
        if isinstance(value, int):
            return rational(value)
        if isinstance(value, (Fraction, type(self.one))):
            return rational(value.numerator, value.denominator)
        raise FieldMismatch(f"cannot coerce {value!r} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        return a / b

    def is_zero(self, a):
        return not a

    def sign(self, a):
        return (a > 0) - (a < 0)

    def sort_key(self, a):
        return a

    def descriptor(self):
        return "q"

    def parse_atom(self, text):
        m = _RAT_RE.match(text)
        if not m:
            raise ParseError(f"bad rational {text!r}")
        return rational(int(m.group(1)), int(m.group(2) or 1))

    def format_atom(self, a):
        return str(a)


class QuadraticField(Field):
    """Q(sqrt(d)) for a squarefree positive integer d; elements are (a, b) pairs."""

    char = 0

    def __init__(self, d):
        if d <= 0:
            raise ValueError("d must be positive")
        if any(d % (q * q) == 0 for q in range(2, int(d**0.5) + 1)):
            raise ValueError("d must be squarefree")
        self.d = d
        self.zero = (rational(0), rational(0))
        self.one = (rational(1), rational(0))
        self.sqrt_gen = (rational(0), rational(1))

    def _key(self):
        return (self.d,)

    def coerce(self, value):
        if isinstance(value, tuple) and len(value) == 2:
            return (_as_rational(value[0]), _as_rational(value[1]))
        if isinstance(value, (int, Fraction, type(_ratio(1)))):
            return (_as_rational(value), rational(0))
        raise FieldMismatch(f"cannot coerce {value!r} into Q(sqrt({self.d}))")

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def mul(self, a, b):
        return (a[0] * b[0] + a[1] * b[1] * self.d, a[0] * b[1] + a[1] * b[0])

    def neg(self, a):
        return (-a[0], -a[1])

    def inv(self, a):
        norm = a[0] * a[0] - a[1] * a[1] * self.d
        if not norm:
            if not a[0] and not a[1]:
                raise DivisionByZero("inverse of zero")
            raise DivisionByZero("zero norm in quadratic field")  # impossible for squarefree d
        return (a[0] / norm, -a[1] / norm)

    def is_zero(self, a):
        return not a[0] and not a[1]

    def sign(self, a):
        # sign of a[0] + a[1]*sqrt(d), decided by exact integer comparisons
        ra, rb = a
        sa = (ra > 0) - (ra < 0)
        sb = (rb > 0) - (rb < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite nonzero signs: compare ra^2 with rb^2 * d
        lhs = ra * ra
        rhs = rb * rb * self.d
        if lhs == rhs:  # sqrt(d) rational, impossible
            return 0
        return sa if lhs > rhs else sb

    def sort_key(self, a):
        return a

    def descriptor(self):
        return f"qsqrt:{self.d}"

    def parse_atom(self, text):
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        m = re.match(
            r"^(?P<rat>[+-]?\d+(?:/\d+)?)?"
            r"(?:(?P<sgn>[+-]?)(?:(?P<coef>\d+(?:/\d+)?)\*)?sqrt\((?P<d>\d+)\))?$",
            text.replace(" ", ""),
        )
        if not m or (m.group("rat") is None and m.group("d") is None):
            raise ParseError(f"bad quadratic coefficient {text!r}")
        a = rational(0)
        if m.group("rat") is not None:
            a = RationalField().parse_atom(m.group("rat"))
        b = rational(0)
        if m.group("d") is not None:
            if int(m.group("d")) != self.d:
                raise ParseError(f"sqrt({m.group('d')}) in a Q(sqrt({self.d})) context")
            b = rational(1)
            if m.group("coef"):
                b = RationalField().parse_atom(m.group("coef"))
            if m.group("sgn") == "-":
                b = -b
        return (a, b)

    def format_atom(self, a):
        ra, rb = a
        if not rb:
            return str(ra)
        if rb == 1:
            root = f"sqrt({self.d})"
        elif rb == -1:
            root = f"-sqrt({self.d})"
        else:
            root = f"{rb}*sqrt({self.d})"
        if not ra:
            return root
        if root.startswith("-"):
            return f"{ra}{root}"
        return f"{ra}+{root}"


class PrimeField(Field):
    """F_p for an odd prime p < 2**62; elements are ints in [0, p)."""

    def __init__(self, p):
        if p < 3 or p % 2 == 0 or p >= 1 << 62:
            raise BadPrime(f"modulus must be an odd prime < 2^62, got {p}")
        if not _is_prime(p):
            raise BadPrime(f"{p} is not prime")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1

    def _key(self):
        return (self.p,)

    def coerce(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, (Fraction, type(_ratio(1)))):
            den = int(value.denominator) % self.p
            if den == 0:
                raise BadPrime(f"denominator of {value} vanishes mod {self.p}")
            return int(value.numerator) * pow(den, self.p - 2, self.p) % self.p
        raise FieldMismatch(f"cannot coerce {value!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by zero")
        return a * pow(b, self.p - 2, self.p) % self.p

    def is_zero(self, a):
        return a == 0

    def sort_key(self, a):
        return a

    def descriptor(self):
        return f"fp:{self.p}"

    def parse_atom(self, text):
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        m = re.match(r"^([+-]?\d+)(?:mod(\d+))?$", text.replace(" ", ""))
        if not m:
            raise ParseError(f"bad residue {text!r}")
        if m.group(2) is not None and int(m.group(2)) != self.p:
            raise ParseError(f"modulus {m.group(2)} in an F_{self.p} context")
        return int(m.group(1)) % self.p

    def format_atom(self, a):
        return str(a)


QQ = RationalField()


def _is_prime(n):
    from sympy import isprime

    return isprime(n)


def sqrt_in_prime_field(p, d):
    """Smaller square root of d mod p, or None when d is a non-residue.

    Raises BadPrime when p divides d (the spec treats that as a skipped prime).
    """
    if p < 3 or not _is_prime(p):
        raise BadPrime(f"{p} is not an odd prime")
    if d <= 0:
        raise BadPrime("d must be positive")
    if d % p == 0:
        raise BadPrime(f"{p} divides {d}")
    from sympy.ntheory.residue_ntheory import sqrt_mod

    root = sqrt_mod(d, p)
    if root is None:
        return None
    return min(root, p - root)


def field_from_descriptor(text):
    """Inverse of Field.descriptor(): "q", "fp:<p>", "qsqrt:<d>"."""
    text = text.strip().lower()
    if text == "q":
        return QQ
    if text.startswith("fp:"):
        return PrimeField(int(text[3:]))
    if text.startswith("qsqrt:"):
        return QuadraticField(int(text[6:]))
    raise ParseError(f"unknown field descriptor {text!r}")
