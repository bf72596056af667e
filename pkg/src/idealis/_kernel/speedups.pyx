# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernel for F_p polynomials on packed degrevlex keys.

Bit-identical to ``fallback``: same reducer-selection rule (first basis
element whose lead divides), same merge order, same outputs.
"""

from libc.stdlib cimport free, malloc, realloc

from idealis._kernel.fallback import StepLimit

BACKEND = "speedups"


ctypedef unsigned long long u64

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"


cdef struct Elem:
    u64 *keys
    u64 *coeffs
    Py_ssize_t length


cdef class Reducer:
    cdef u64 p, mul_offset, guard_mask, tail_mask
    cdef Elem *elems
    cdef u64 *lead_keys
    cdef Py_ssize_t n, capacity
    cdef u64 *wk_a
    cdef u64 *wc_a
    cdef u64 *wk_b
    cdef u64 *wc_b
    cdef Py_ssize_t work_cap
    cdef public unsigned long long steps
    cdef public unsigned long long step_cap

    def __cinit__(self, p, mul_offset, guard_mask, tail_mask):
        self.p = p
        self.mul_offset = mul_offset
        self.guard_mask = guard_mask
        self.tail_mask = tail_mask
        self.capacity = 64
        self.elems = <Elem *>malloc(self.capacity * sizeof(Elem))
        self.lead_keys = <u64 *>malloc(self.capacity * sizeof(u64))
        self.n = 0
        self.work_cap = 256
        self.wk_a = <u64 *>malloc(self.work_cap * sizeof(u64))
        self.wc_a = <u64 *>malloc(self.work_cap * sizeof(u64))
        self.wk_b = <u64 *>malloc(self.work_cap * sizeof(u64))
        self.wc_b = <u64 *>malloc(self.work_cap * sizeof(u64))
        self.steps = 0
        self.step_cap = 0

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.elems != NULL:
            for i in range(self.n):
                free(self.elems[i].keys)
                free(self.elems[i].coeffs)
            free(self.elems)
        free(self.lead_keys)
        free(self.wk_a)
        free(self.wc_a)
        free(self.wk_b)
        free(self.wc_b)

    cdef void _ensure_work(self, Py_ssize_t needed):
        if needed <= self.work_cap:
            return
        while self.work_cap < needed:
            self.work_cap *= 2
        self.wk_a = <u64 *>realloc(self.wk_a, self.work_cap * sizeof(u64))
        self.wc_a = <u64 *>realloc(self.wc_a, self.work_cap * sizeof(u64))
        self.wk_b = <u64 *>realloc(self.wk_b, self.work_cap * sizeof(u64))
        self.wc_b = <u64 *>realloc(self.wc_b, self.work_cap * sizeof(u64))

    def size(self):
        return self.n

    def total_terms(self):
        cdef Py_ssize_t i
        cdef Py_ssize_t total = 0
        for i in range(self.n):
            total += self.elems[i].length
        return total

    def add(self, keys, coeffs):
        cdef Py_ssize_t m = len(keys)
        if m == 0:
            raise ValueError("cannot add zero polynomial")
        if coeffs[0] != 1:
            raise ValueError("reducer elements must be monic")
        if self.n == self.capacity:
            self.capacity *= 2
            self.elems = <Elem *>realloc(self.elems, self.capacity * sizeof(Elem))
            self.lead_keys = <u64 *>realloc(self.lead_keys, self.capacity * sizeof(u64))
        cdef Elem *e = &self.elems[self.n]
        e.keys = <u64 *>malloc(m * sizeof(u64))
        e.coeffs = <u64 *>malloc(m * sizeof(u64))
        e.length = m
        cdef Py_ssize_t i
        for i in range(m):
            e.keys[i] = keys[i]
            e.coeffs[i] = coeffs[i]
        self.lead_keys[self.n] = e.keys[0]
        self.n += 1

    def element(self, Py_ssize_t i):
        cdef Elem *e = &self.elems[i]
        cdef Py_ssize_t j
        keys = [0] * e.length
        coeffs = [0] * e.length
        for j in range(e.length):
            keys[j] = e.keys[j]
            coeffs[j] = e.coeffs[j]
        return keys, coeffs

    cdef Py_ssize_t _find_divisor(self, u64 key) nogil:
        cdef u64 tail = key & self.tail_mask
        cdef u64 lt
        cdef Py_ssize_t t
        for t in range(self.n):
            lt = self.lead_keys[t] & self.tail_mask
            if lt >= tail and ((lt - tail) & self.guard_mask) == 0:
                return t
        return -1

    def nf(self, keys, coeffs):
        cdef Py_ssize_t m = len(keys)
        self._ensure_work(m)
        cdef Py_ssize_t i
        for i in range(m):
            self.wk_a[i] = keys[i]
            self.wc_a[i] = coeffs[i]
        return self._reduce(m)

    def spoly_nf(self, Py_ssize_t i, Py_ssize_t j, lcm_key):
        cdef Elem *ei = &self.elems[i]
        cdef Elem *ej = &self.elems[j]
        cdef u64 lcm = lcm_key
        cdef u64 di = lcm - ei.keys[0]
        cdef u64 dj = lcm - ej.keys[0]
        cdef u64 p = self.p
        self._ensure_work(ei.length + ej.length)
        cdef Py_ssize_t a = 1, b = 1, out = 0
        cdef u64 ka, kb, c
        while a < ei.length and b < ej.length:
            ka = ei.keys[a] + di
            kb = ej.keys[b] + dj
            if ka > kb:
                self.wk_a[out] = ka
                self.wc_a[out] = ei.coeffs[a]
                out += 1
                a += 1
            elif ka < kb:
                self.wk_a[out] = kb
                self.wc_a[out] = p - ej.coeffs[b]
                out += 1
                b += 1
            else:
                c = (ei.coeffs[a] + p - ej.coeffs[b]) % p
                if c:
                    self.wk_a[out] = ka
                    self.wc_a[out] = c
                    out += 1
                a += 1
                b += 1
        while a < ei.length:
            self.wk_a[out] = ei.keys[a] + di
            self.wc_a[out] = ei.coeffs[a]
            out += 1
            a += 1
        while b < ej.length:
            self.wk_a[out] = ej.keys[b] + dj
            self.wc_a[out] = p - ej.coeffs[b]
            out += 1
            b += 1
        return self._reduce(out)

    cdef _reduce(self, Py_ssize_t wlen):
        # work starts in buffers A; merges ping-pong between A and B
        cdef u64 p = self.p
        cdef Py_ssize_t pos = 0, t, a, b, out, glen
        cdef u64 lead, delta, c, ka, kb, cc
        cdef Elem *g
        cdef bint using_a = True
        cdef u64 *wk
        cdef u64 *wc
        cdef u64 *ok
        cdef u64 *oc
        cdef u128 wide
        rkeys = []
        rcoeffs = []
        while pos < wlen:
            wk = self.wk_a if using_a else self.wk_b
            wc = self.wc_a if using_a else self.wc_b
            lead = wk[pos]
            t = self._find_divisor(lead)
            if t < 0:
                rkeys.append(wk[pos])
                rcoeffs.append(wc[pos])
                pos += 1
                continue
            self.steps += 1
            if self.step_cap and self.steps > self.step_cap:
                raise StepLimit("reduction step cap exceeded")
            g = &self.elems[t]
            glen = g.length
            delta = lead - g.keys[0]
            c = wc[pos]
            self._ensure_work(wlen - pos - 1 + glen)
            # realloc may have moved the buffers; refresh both views
            wk = self.wk_a if using_a else self.wk_b
            wc = self.wc_a if using_a else self.wc_b
            ok = self.wk_b if using_a else self.wk_a
            oc = self.wc_b if using_a else self.wc_a
            a = pos + 1
            b = 1
            out = 0
            while a < wlen and b < glen:
                ka = wk[a]
                kb = g.keys[b] + delta
                if ka > kb:
                    ok[out] = ka
                    oc[out] = wc[a]
                    out += 1
                    a += 1
                elif ka < kb:
                    wide = <u128>c * g.coeffs[b]
                    ok[out] = kb
                    oc[out] = p - <u64>(wide % p)
                    out += 1
                    b += 1
                else:
                    wide = <u128>c * g.coeffs[b]
                    cc = (wc[a] + p - <u64>(wide % p)) % p
                    if cc:
                        ok[out] = ka
                        oc[out] = cc
                        out += 1
                    a += 1
                    b += 1
            while a < wlen:
                ok[out] = wk[a]
                oc[out] = wc[a]
                out += 1
                a += 1
            while b < glen:
                wide = <u128>c * g.coeffs[b]
                ok[out] = g.keys[b] + delta
                oc[out] = p - <u64>(wide % p)
                out += 1
                b += 1
            using_a = not using_a
            wlen = out
            pos = 0
        return rkeys, rcoeffs
