"""Multivariate polynomials over an exact field with a fixed monomial order.

A Polynomial is an immutable tuple of (packed monomial key, coefficient)
terms, strictly descending in the ring's order and free of zero
coefficients.  The zero polynomial is the empty tuple.
"""

from __future__ import annotations

import re

from .errors import BadPrime, FieldMismatch, ParseError, RingMismatch
from .field import PrimeField, QuadraticField, RationalField, sqrt_in_prime_field
from .monomial import MAX_EXP, Degrevlex, MonomialOrder


class Ring:
    """Variable list + coefficient field + monomial order."""

    __slots__ = ("vars", "field", "order", "_var_index", "_mono_cache")

    def __init__(self, variables, field, order=None):
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        for v in self.vars:
            if v in ("sqrt", "mod") or not re.match(r"^[A-Za-z_]\w*$", v):
                raise ValueError(f"bad variable name {v!r}")
        self.field = field
        self.order = order if order is not None else Degrevlex(len(self.vars))
        if self.order.nvars != len(self.vars):
            raise ValueError("order arity does not match variable count")
        self._var_index = {v: i for i, v in enumerate(self.vars)}
        self._mono_cache = {}

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.vars == other.vars
            and self.field == other.field
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.vars, self.field, self.order))

    def __repr__(self):
        return f"Ring({self.vars}, {self.field.descriptor()}, {self.order.name()})"

    # -- construction ----------------------------------------------------
    @property
    def zero(self):
        return Polynomial(self, ())

    @property
    def one(self):
        return self.constant(1)

    def constant(self, value):
        c = self.field.coerce(value)
        if self.field.is_zero(c):
            return self.zero
        return Polynomial(self, ((self.order.one, c),))

    def var(self, name):
        exps = [0] * len(self.vars)
        exps[self._var_index[name]] = 1
        return Polynomial(self, ((self.order.key(tuple(exps)), self.field.one),))

    def gens(self):
        return tuple(self.var(v) for v in self.vars)

    def monomial(self, exps, coeff=1):
        c = self.field.coerce(coeff)
        if self.field.is_zero(c):
            return self.zero
        return Polynomial(self, ((self.order.key(tuple(exps)), c),))

    def from_terms(self, pairs):
        """Canonicalize an iterable of (key, coeff): merge, drop zeros, sort."""
        acc = {}
        fld = self.field
        for key, c in pairs:
            if key in acc:
                acc[key] = fld.add(acc[key], c)
            else:
                acc[key] = c
        terms = tuple(
            (k, acc[k]) for k in sorted(acc, reverse=True) if not fld.is_zero(acc[k])
        )
        return Polynomial(self, terms)

    def linear_form(self, coeffs):
        """a*x_1 + b*x_2 + ... from a coefficient sequence."""
        if len(coeffs) != len(self.vars):
            raise ValueError("coefficient count != variable count")
        pairs = []
        for i, c in enumerate(coeffs):
            exps = [0] * len(self.vars)
            exps[i] = 1
            pairs.append((self.order.key(tuple(exps)), self.field.coerce(c)))
        return self.from_terms(pairs)

    def monomials_of_degree(self, d):
        """All degree-d monomial keys, descending in the ring order."""
        cached = self._mono_cache.get(d)
        if cached is None:
            n = len(self.vars)
            out = []

            def rec(prefix, remaining, slots):
                if slots == 1:
                    out.append(self.order.key(tuple(prefix + [remaining])))
                    return
                for e in range(remaining, -1, -1):
                    rec(prefix + [e], remaining - e, slots - 1)

            rec([], d, n)
            out.sort(reverse=True)
            cached = self._mono_cache[d] = tuple(out)
        return cached

    def with_order(self, order):
        return Ring(self.vars, self.field, order)

    def convert(self, poly):
        """Re-sort a polynomial from a ring with the same vars and field."""
        if poly.ring.vars != self.vars or poly.ring.field != self.field:
            raise RingMismatch("conversion requires identical variables and field")
        src = poly.ring.order
        return self.from_terms(
            (self.order.key(src.exps(k)), c) for k, c in poly.terms
        )

    def extend_front(self, new_vars, order=None):
        """New ring with `new_vars` prepended; used for elimination tricks."""
        return Ring(tuple(new_vars) + self.vars, self.field, order)

    def inject(self, poly, target):
        """Map a polynomial of this ring into `target`, matching vars by name.

        Variables absent from `target` are allowed only with exponent zero
        (projection onto a subring after elimination)."""
        pos = [target._var_index.get(v) for v in self.vars]
        n = len(target.vars)
        pairs = []
        for k, c in poly.terms:
            exps = [0] * n
            for i, e in enumerate(self.order.exps(k)):
                if pos[i] is None:
                    if e:
                        raise RingMismatch(
                            f"variable {self.vars[i]!r} missing from target ring"
                        )
                    continue
                exps[pos[i]] = e
            pairs.append((target.order.key(tuple(exps)), c))
        return target.from_terms(pairs)

    def parse(self, text):
        return _parse_polynomial(self, text)


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- basic queries -----------------------------------------------------
    def is_zero(self):
        return not self.terms

    @property
    def lead_key(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0][0]

    @property
    def lead_coeff(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0][1]

    def lead_monomial_exps(self):
        return self.ring.order.exps(self.lead_key)

    def num_terms(self):
        return len(self.terms)

    def degree(self):
        """Total degree, -1 for the zero polynomial."""
        if not self.terms:
            return -1
        order = self.ring.order
        return max(order.degree(k) for k, _ in self.terms)

    def is_homogeneous(self):
        if not self.terms:
            return True
        order = self.ring.order
        degs = {order.degree(k) for k, _ in self.terms}
        return len(degs) == 1

    def coefficient(self, exps):
        key = self.ring.order.key(tuple(exps))
        for k, c in self.terms:
            if k == key:
                return c
        return self.ring.field.zero

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.terms))

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        self._check(other)
        return _merge(self, other, False)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        self._check(other)
        return _merge(self, other, True)

    def __neg__(self):
        fld = self.ring.field
        return Polynomial(self.ring, tuple((k, fld.neg(c)) for k, c in self.terms))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return _multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, value):
        fld = self.ring.field
        c = fld.coerce(value)
        if fld.is_zero(c):
            return self.ring.zero
        return Polynomial(self.ring, tuple((k, fld.mul(cc, c)) for k, cc in self.terms))

    def monic(self):
        if not self.terms:
            return self
        fld = self.ring.field
        inv = fld.inv(self.lead_coeff)
        return Polynomial(self.ring, tuple((k, fld.mul(c, inv)) for k, c in self.terms))

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    # -- calculus -------------------------------------------------------------
    def derivative(self, var):
        ring = self.ring
        i = ring._var_index[var]
        order = ring.order
        fld = ring.field
        pairs = []
        for k, c in self.terms:
            exps = order.exps(k)
            e = exps[i]
            if e == 0:
                continue
            factor = fld.coerce(e)
            if fld.is_zero(factor):  # char p can kill a term
                continue
            new = list(exps)
            new[i] = e - 1
            pairs.append((order.key(tuple(new)), fld.mul(c, factor)))
        return ring.from_terms(pairs)

    def evaluate(self, coords):
        ring = self.ring
        if len(coords) != len(ring.vars):
            raise FieldMismatch("coordinate count != variable count")
        fld = ring.field
        vals = [fld.coerce(c) for c in coords]
        powers = [[fld.one] for _ in vals]
        order = ring.order
        total = fld.zero
        for k, c in self.terms:
            term = c
            for i, e in enumerate(order.exps(k)):
                cache = powers[i]
                while len(cache) <= e:
                    cache.append(fld.mul(cache[-1], vals[i]))
                if e:
                    term = fld.mul(term, cache[e])
            total = fld.add(total, term)
        return total

    def compose_linear(self, matrix):
        """f(M x): substitute each variable by the matching row of M * vars."""
        ring = self.ring
        n = len(ring.vars)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("matrix shape must match variable count")
        images = [ring.linear_form(row) for row in matrix]
        powers = [[ring.one] for _ in range(n)]
        order = ring.order
        result = ring.zero
        for k, c in self.terms:
            term = ring.constant(c)
            for i, e in enumerate(order.exps(k)):
                cache = powers[i]
                while len(cache) <= e:
                    cache.append(cache[-1] * images[i])
                if e:
                    term = term * cache[e]
            result = result + term
        return result

    def specialize(self, p):
        """Coefficientwise reduction into F_p (sqrt(d) maps to its smaller root)."""
        ring = self.ring
        src = ring.field
        target = PrimeField(p)
        if isinstance(src, RationalField):
            conv = target.coerce
        elif isinstance(src, QuadraticField):
            root = sqrt_in_prime_field(p, src.d)
            if root is None:
                raise BadPrime(f"sqrt({src.d}) does not exist mod {p}")

            def conv(val):
                return (target.coerce(val[0]) + target.coerce(val[1]) * root) % p

        elif isinstance(src, PrimeField):
            raise FieldMismatch("specialize expects a characteristic-zero source")
        else:  # pragma: no cover
            raise FieldMismatch(f"cannot specialize from {src.descriptor()}")
        new_ring = Ring(ring.vars, target, ring.order)
        return new_ring.from_terms((k, conv(c)) for k, c in self.terms)

    # -- text -------------------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"<{format_polynomial(self)}>"


def _merge(f, g, subtract):
    """Merge two descending term lists; the workhorse for add/sub."""
    fld = f.ring.field
    ft, gt = f.terms, g.terms
    i = j = 0
    out = []
    nf, ng = len(ft), len(gt)
    while i < nf and j < ng:
        kf, cf = ft[i]
        kg, cg = gt[j]
        if kf > kg:
            out.append((kf, cf))
            i += 1
        elif kf < kg:
            out.append((kg, fld.neg(cg) if subtract else cg))
            j += 1
        else:
            c = fld.sub(cf, cg) if subtract else fld.add(cf, cg)
            if not fld.is_zero(c):
                out.append((kf, c))
            i += 1
            j += 1
    out.extend(ft[i:])
    if subtract:
        out.extend((k, fld.neg(c)) for k, c in gt[j:])
    else:
        out.extend(gt[j:])
    return Polynomial(f.ring, tuple(out))


def _multiply(f, g):
    if not f.terms or not g.terms:
        return f.ring.zero
    if f.degree() + g.degree() > MAX_EXP:
        raise ValueError("product degree exceeds monomial capacity")
    fld = f.ring.field
    mul_key = f.ring.order.mul
    acc = {}
    for kf, cf in f.terms:
        for kg, cg in g.terms:
            k = mul_key(kf, kg)
            c = fld.mul(cf, cg)
            if k in acc:
                acc[k] = fld.add(acc[k], c)
            else:
                acc[k] = c
    terms = tuple((k, acc[k]) for k in sorted(acc, reverse=True) if not fld.is_zero(acc[k]))
    return Polynomial(f.ring, terms)


def _point_coords(point):
    return point.coords if hasattr(point, "coords") else tuple(point)


def vanishing_order_at_least(f, point, m):
    """True iff every partial derivative of total order < m (including f
    itself) vanishes at the point; f must be homogeneous."""
    if m < 1:
        raise ValueError("order must be >= 1")
    if not f.is_homogeneous():
        raise ValueError("vanishing order is defined for homogeneous input")
    coords = _point_coords(point)
    fld = f.ring.field
    layer = [f]
    for step in range(m):
        for g in layer:
            if not fld.is_zero(g.evaluate(coords)):
                return False
        if step == m - 1:
            break
        seen = {}
        for g in layer:
            for v in f.ring.vars:
                d = g.derivative(v)
                if d.terms and d.terms not in seen:
                    seen[d.terms] = d
        layer = list(seen.values())
        if not layer:
            return True
    return True


def derivative_layers(f, depth):
    """[{order-0 derivs}, {order-1}, ...] up to `depth`, deduplicated; used
    to batch vanishing-order checks over many points."""
    layers = [[f]]
    for _ in range(depth):
        seen = {}
        for g in layers[-1]:
            for v in f.ring.vars:
                d = g.derivative(v)
                if d.terms and d.terms not in seen:
                    seen[d.terms] = d
        layers.append(list(seen.values()))
    return layers


# -- text format ------------------------------------------------------------------
#
# sum of terms c*x^a*y^b*z^c; coefficients `p/q`, `p/q+r/s*sqrt(d)` (in
# parentheses when combined with a monomial) or `n mod p`; whitespace free.

_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z_]\w*|[()+\-*/^])")


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"bad character at {text[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _parse_polynomial(ring, text):
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    fld = ring.field
    pos = 0
    result = ring.zero

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_numeric_atom():
        # NUMBER [/ NUMBER] [mod NUMBER] as a field coefficient
        nonlocal pos
        start = pos
        take()
        if peek() == "/":
            take()
            if not peek() or not peek().isdigit():
                raise ParseError("expected denominator")
            take()
        if peek() == "mod":
            take()
            if not peek() or not peek().isdigit():
                raise ParseError("expected modulus")
            take()
        return fld.parse_atom("".join(_respace(tokens[start:pos])))

    def parse_atom():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if tok.isdigit():
            return ("coeff", parse_numeric_atom())
        if tok == "(":
            depth = 0
            start = pos
            while pos < len(tokens):
                if tokens[pos] == "(":
                    depth += 1
                elif tokens[pos] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                pos += 1
            if depth != 0:
                raise ParseError("unbalanced parentheses")
            inner = "".join(_respace(tokens[start + 1:pos]))
            take()  # consume ')'
            return ("coeff", fld.parse_atom(inner))
        if tok == "sqrt":
            take()
            if take() != "(" or not peek().isdigit():
                raise ParseError("malformed sqrt()")
            d = take()
            if take() != ")":
                raise ParseError("malformed sqrt()")
            return ("coeff", fld.parse_atom(f"sqrt({d})"))
        if re.match(r"^[A-Za-z_]\w*$", tok):
            take()
            if tok not in ring._var_index:
                raise ParseError(f"unknown variable {tok!r}")
            e = 1
            if peek() == "^":
                take()
                if not peek() or not peek().isdigit():
                    raise ParseError("expected exponent")
                e = int(take())
            return ("var", (tok, e))
        raise ParseError(f"unexpected token {tok!r}")

    def parse_term(sign):
        coeff = fld.one
        exps = [0] * len(ring.vars)
        while True:
            kind, val = parse_atom()
            if kind == "coeff":
                coeff = fld.mul(coeff, val)
            else:
                name, e = val
                exps[ring._var_index[name]] += e
            if peek() == "*":
                take()
                continue
            break
        if sign < 0:
            coeff = fld.neg(coeff)
        return ring.order.key(tuple(exps)), coeff

    pairs = []
    sign = 1
    if peek() in ("+", "-"):
        sign = -1 if take() == "-" else 1
    while True:
        pairs.append(parse_term(sign))
        tok = peek()
        if tok is None:
            break
        if tok == "+":
            take()
            sign = 1
        elif tok == "-":
            take()
            sign = -1
        else:
            raise ParseError(f"unexpected token {tok!r}")
    result = ring.from_terms(pairs)
    return result


def _respace(tokens):
    """Rebuild atom text, restoring the space in `n mod p`."""
    out = []
    for t in tokens:
        if t == "mod":
            out.append(" mod ")
        else:
            out.append(t)
    return out


def _monomial_str(ring, key):
    parts = []
    for name, e in zip(ring.vars, ring.order.exps(key)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(f):
    if not f.terms:
        return "0"
    ring = f.ring
    fld = ring.field
    ordered = not isinstance(fld, PrimeField)  # F_p prints raw residues
    pieces = []
    for k, c in f.terms:
        if ordered:
            s = fld.sign(c)
            mag = fld.neg(c) if s < 0 else c
        else:
            s = 1
            mag = c
        cstr = fld.format_atom(mag)
        if re.search(r"(?<!^)[+-]", cstr) or "sqrt" in cstr:
            cstr = f"({cstr})"
        mstr = _monomial_str(ring, k)
        if not mstr:
            body = cstr
        elif cstr == "1":
            body = mstr
        else:
            body = f"{cstr}*{mstr}"
        if not pieces:
            pieces.append(body if s >= 0 else f"-{body}")
        else:
            pieces.append(f" + {body}" if s >= 0 else f" - {body}")
    return "".join(pieces)
