"""Pure-Python twin of the compiled reduction kernel.

Same API and bit-identical results as ``speedups``; selected when the
compiled extension is unavailable or IDEALIS_PURE_PYTHON=1.  Polynomials
are (keys, coeffs) parallel lists, keys packed degrevlex and strictly
descending, coefficients reduced mod p, basis elements monic.
"""

from __future__ import annotations

BACKEND = "fallback"


class StepLimit(RuntimeError):
    pass


class Reducer:
    """Holds a monic reducer set and performs full normal forms against it."""

    def __init__(self, p, mul_offset, guard_mask, tail_mask):
        self.p = p
        self.mul_offset = mul_offset
        self.guard_mask = guard_mask
        self.tail_mask = tail_mask
        self.elems = []
        self.lead_keys = []
        self.steps = 0
        self.step_cap = 0  # 0 = unlimited

    def size(self):
        return len(self.elems)

    def total_terms(self):
        return sum(len(k) for k, _ in self.elems)

    def add(self, keys, coeffs):
        if not keys:
            raise ValueError("cannot add zero polynomial")
        if coeffs[0] != 1:
            raise ValueError("reducer elements must be monic")
        self.elems.append((list(keys), list(coeffs)))
        self.lead_keys.append(keys[0])

    def element(self, i):
        keys, coeffs = self.elems[i]
        return list(keys), list(coeffs)

    def _find_divisor(self, key):
        tail = key & self.tail_mask
        guard = self.guard_mask
        for t, lk in enumerate(self.lead_keys):
            lt = lk & self.tail_mask
            if lt >= tail and ((lt - tail) & guard) == 0:
                return t
        return -1

    def nf(self, keys, coeffs):
        return self._reduce(list(keys), list(coeffs))

    def spoly_nf(self, i, j, lcm_key):
        """Normal form of the S-polynomial of (monic) elements i and j."""
        ki, ci = self.elems[i]
        kj, cj = self.elems[j]
        p = self.p
        di = lcm_key - ki[0]
        dj = lcm_key - kj[0]
        wkeys, wcoeffs = [], []
        a, b = 1, 1  # leads cancel by construction
        na, nb = len(ki), len(kj)
        while a < na and b < nb:
            ka = ki[a] + di
            kb = kj[b] + dj
            if ka > kb:
                wkeys.append(ka)
                wcoeffs.append(ci[a])
                a += 1
            elif ka < kb:
                wkeys.append(kb)
                wcoeffs.append(p - cj[b])
                b += 1
            else:
                c = (ci[a] - cj[b]) % p
                if c:
                    wkeys.append(ka)
                    wcoeffs.append(c)
                a += 1
                b += 1
        while a < na:
            wkeys.append(ki[a] + di)
            wcoeffs.append(ci[a])
            a += 1
        while b < nb:
            wkeys.append(kj[b] + dj)
            wcoeffs.append(p - cj[b])
            b += 1
        return self._reduce(wkeys, wcoeffs)

    def _reduce(self, wkeys, wcoeffs):
        p = self.p
        rkeys, rcoeffs = [], []
        pos = 0
        while pos < len(wkeys):
            lead = wkeys[pos]
            t = self._find_divisor(lead)
            if t < 0:
                rkeys.append(lead)
                rcoeffs.append(wcoeffs[pos])
                pos += 1
                continue
            self.steps += 1
            if self.step_cap and self.steps > self.step_cap:
                raise StepLimit("reduction step cap exceeded")
            gkeys, gcoeffs = self.elems[t]
            delta = lead - gkeys[0]
            c = wcoeffs[pos]
            nkeys, ncoeffs = [], []
            a = pos + 1
            b = 1
            na, nb = len(wkeys), len(gkeys)
            while a < na and b < nb:
                ka = wkeys[a]
                kb = gkeys[b] + delta
                if ka > kb:
                    nkeys.append(ka)
                    ncoeffs.append(wcoeffs[a])
                    a += 1
                elif ka < kb:
                    nkeys.append(kb)
                    ncoeffs.append(p - c * gcoeffs[b] % p)
                    b += 1
                else:
                    cc = (wcoeffs[a] - c * gcoeffs[b]) % p
                    if cc:
                        nkeys.append(ka)
                        ncoeffs.append(cc)
                    a += 1
                    b += 1
            while a < na:
                nkeys.append(wkeys[a])
                ncoeffs.append(wcoeffs[a])
                a += 1
            while b < nb:
                nkeys.append(gkeys[b] + delta)
                ncoeffs.append(p - c * gcoeffs[b] % p)
                b += 1
            wkeys, wcoeffs = nkeys, ncoeffs
            pos = 0
        return rkeys, rcoeffs
