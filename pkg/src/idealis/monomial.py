"""Monomial orders on packed exponent keys.

A monomial is stored as a single integer key whose bit fields are laid
out so that plain integer comparison of keys agrees with the monomial
order (bigger key = bigger monomial).  Multiplication of monomials is
key addition up to a fixed offset, and divisibility is a masked
subtraction with per-field guard bits.  With 12-bit fields a degrevlex
key on <= 4 variables fits in 60 bits, which is what lets the compiled
kernel work on flat uint64 arrays.
"""

from __future__ import annotations

FIELD_BITS = 12
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_EXP = (1 << (FIELD_BITS - 1)) - 1  # top bit of each field is a guard bit
GUARD_BIT = 1 << (FIELD_BITS - 1)


class MonomialOrder:
    """Total, multiplicative, global order via packed integer keys."""

    nvars: int

    def key(self, exps):
        raise NotImplementedError

    def exps(self, key):
        raise NotImplementedError

    def degree(self, key):
        raise NotImplementedError

    def mul(self, k1, k2):
        raise NotImplementedError

    def div(self, k1, k2):
        """Key of the quotient; caller guarantees divisibility."""
        raise NotImplementedError

    def divides(self, k1, k2):
        """True when the monomial of k1 divides the monomial of k2."""
        raise NotImplementedError

    def lcm(self, k1, k2):
        e1 = self.exps(k1)
        e2 = self.exps(k2)
        return self.key(tuple(max(a, b) for a, b in zip(e1, e2)))

    def coprime(self, k1, k2):
        e1 = self.exps(k1)
        e2 = self.exps(k2)
        return all(a == 0 or b == 0 for a, b in zip(e1, e2))

    @property
    def one(self):
        return self.key((0,) * self.nvars)

    def name(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))

    def __repr__(self):
        return f"{type(self).__name__}({self.nvars})"


def _check_exps(exps, nvars):
    if len(exps) != nvars:
        raise ValueError(f"expected {nvars} exponents, got {len(exps)}")
    for e in exps:
        if e < 0 or e > MAX_EXP:
            raise ValueError(f"exponent {e} out of range [0, {MAX_EXP}]")


class Degrevlex(MonomialOrder):
    """Degree first, then reverse-lexicographic tie break.

    Layout (most significant first): [deg][M-e_n]...[M-e_1] where
    M = MAX_EXP, so a straight integer comparison implements the order.
    """

    def __init__(self, nvars):
        self.nvars = nvars
        self._deg_shift = nvars * FIELD_BITS
        self.tail_mask = (1 << self._deg_shift) - 1
        self.guard_mask = 0
        self.mul_offset = 0
        for j in range(nvars):
            self.guard_mask |= GUARD_BIT << (j * FIELD_BITS)
            self.mul_offset |= MAX_EXP << (j * FIELD_BITS)

    def key(self, exps):
        _check_exps(exps, self.nvars)
        deg = sum(exps)
        if deg > MAX_EXP:
            raise ValueError(f"total degree {deg} exceeds {MAX_EXP}")
        k = deg << self._deg_shift
        for j, e in enumerate(exps):
            k |= (MAX_EXP - e) << (j * FIELD_BITS)
        return k

    def exps(self, key):
        return tuple(
            MAX_EXP - ((key >> (j * FIELD_BITS)) & FIELD_MASK)
            for j in range(self.nvars)
        )

    def degree(self, key):
        return key >> self._deg_shift

    def mul(self, k1, k2):
        return k1 + k2 - self.mul_offset

    def div(self, k1, k2):
        return k1 - k2 + self.mul_offset

    def divides(self, k1, k2):
        # complement fields of the divisor must dominate those of the multiple
        t1 = k1 & self.tail_mask
        t2 = k2 & self.tail_mask
        if t1 < t2:
            return False
        return ((t1 - t2) & self.guard_mask) == 0

    def name(self):
        return "degrevlex"


class Lex(MonomialOrder):
    """Pure lexicographic order; first variable most significant."""

    def __init__(self, nvars):
        self.nvars = nvars
        self.guard_mask = 0
        for j in range(nvars):
            self.guard_mask |= GUARD_BIT << (j * FIELD_BITS)

    def key(self, exps):
        _check_exps(exps, self.nvars)
        k = 0
        for j, e in enumerate(exps):
            k |= e << ((self.nvars - 1 - j) * FIELD_BITS)
        return k

    def exps(self, key):
        return tuple(
            (key >> ((self.nvars - 1 - j) * FIELD_BITS)) & FIELD_MASK
            for j in range(self.nvars)
        )

    def degree(self, key):
        return sum(self.exps(key))

    def mul(self, k1, k2):
        return k1 + k2

    def div(self, k1, k2):
        return k1 - k2

    def divides(self, k1, k2):
        if k2 < k1:
            return False
        return ((k2 - k1) & self.guard_mask) == 0

    def name(self):
        return "lex"


class Block(MonomialOrder):
    """Elimination order: degrevlex on the first `front` variables, then
    degrevlex on the rest.  Any monomial containing a front variable beats
    every front-free monomial, which is what elimination needs."""

    def __init__(self, front, nvars):
        if not 0 < front < nvars:
            raise ValueError("front block must be a proper nonempty prefix")
        self.front = front
        self.nvars = nvars
        rest = nvars - front
        self._rest = rest
        # layout, most significant first:
        # [fdeg][M-e_front ... M-e_1][rdeg][M-e_n ... M-e_{front+1}]
        self._rdeg_shift = rest * FIELD_BITS
        self._front_shift = (rest + 1) * FIELD_BITS
        self._fdeg_shift = (rest + 1 + front) * FIELD_BITS
        self.rest_tail_mask = (1 << self._rdeg_shift) - 1
        self.front_tail_mask = ((1 << (front * FIELD_BITS)) - 1) << self._front_shift
        self.guard_mask = 0
        self.mul_offset = 0
        for j in range(rest):
            self.guard_mask |= GUARD_BIT << (j * FIELD_BITS)
            self.mul_offset |= MAX_EXP << (j * FIELD_BITS)
        for j in range(front):
            self.guard_mask |= GUARD_BIT << (self._front_shift + j * FIELD_BITS)
            self.mul_offset |= MAX_EXP << (self._front_shift + j * FIELD_BITS)

    def key(self, exps):
        _check_exps(exps, self.nvars)
        fdeg = sum(exps[: self.front])
        rdeg = sum(exps[self.front:])
        if fdeg > MAX_EXP or rdeg > MAX_EXP:
            raise ValueError("block degree exceeds field capacity")
        k = (fdeg << self._fdeg_shift) | (rdeg << self._rdeg_shift)
        for j in range(self.front):
            k |= (MAX_EXP - exps[j]) << (self._front_shift + j * FIELD_BITS)
        for j in range(self._rest):
            k |= (MAX_EXP - exps[self.front + j]) << (j * FIELD_BITS)
        return k

    def exps(self, key):
        front = tuple(
            MAX_EXP - ((key >> (self._front_shift + j * FIELD_BITS)) & FIELD_MASK)
            for j in range(self.front)
        )
        rest = tuple(
            MAX_EXP - ((key >> (j * FIELD_BITS)) & FIELD_MASK)
            for j in range(self._rest)
        )
        return front + rest

    def degree(self, key):
        return (key >> self._fdeg_shift) + ((key >> self._rdeg_shift) & FIELD_MASK)

    def front_degree(self, key):
        return key >> self._fdeg_shift

    def mul(self, k1, k2):
        return k1 + k2 - self.mul_offset

    def div(self, k1, k2):
        return k1 - k2 + self.mul_offset

    def divides(self, k1, k2):
        f1 = k1 & self.front_tail_mask
        f2 = k2 & self.front_tail_mask
        if f1 < f2 or ((f1 - f2) & self.guard_mask & self.front_tail_mask):
            return False
        r1 = k1 & self.rest_tail_mask
        r2 = k2 & self.rest_tail_mask
        if r1 < r2:
            return False
        return ((r1 - r2) & self.guard_mask & self.rest_tail_mask) == 0

    def name(self):
        return f"block:{self.front}"


def order_from_name(name, nvars):
    name = name.strip().lower()
    if name == "degrevlex":
        return Degrevlex(nvars)
    if name == "lex":
        return Lex(nvars)
    if name.startswith("block:"):
        return Block(int(name.split(":", 1)[1]), nvars)
    raise ValueError(f"unknown monomial order {name!r}")
