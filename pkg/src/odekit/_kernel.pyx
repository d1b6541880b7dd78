# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse polynomial kernels (same contract as _kernel_py)."""

from heapq import heapify, heappop, heappush

DEF SHIFT = 16
MASK = 0xFFFF
# Python-level one so shifts never happen on C integers
cdef object ONE = 1

cdef list _guards = [0]


cpdef object guard(Py_ssize_t nfields):
    cdef Py_ssize_t k
    while len(_guards) <= nfields:
        k = len(_guards) - 1
        _guards.append(_guards[k] | (ONE << (SHIFT * k + SHIFT - 1)))
    return _guards[nfields]


cpdef bint divides(object m1, object m2):
    if m1 > m2:
        return False
    g = guard((m2.bit_length() >> 4) + 1)
    return ((m2 | g) - m1) & g == g


cpdef list decode(object m):
    cdef list out = []
    cdef Py_ssize_t sh
    while m:
        sh = ((m.bit_length() - 1) >> 4) << 4
        e = m >> sh
        m -= e << sh
        out.append((sh >> 4, e))
    return out


cpdef dict p_add(dict a, dict b):
    cdef dict r
    if len(a) < len(b):
        a, b = b, a
    r = dict(a)
    for m, c in b.items():
        v = r.get(m, 0) + c
        if v:
            r[m] = v
        else:
            del r[m]
    return r


cpdef dict p_sub(dict a, dict b):
    cdef dict r = dict(a)
    for m, c in b.items():
        v = r.get(m, 0) - c
        if v:
            r[m] = v
        else:
            del r[m]
    return r


cpdef dict p_neg(dict a):
    return {m: -c for m, c in a.items()}


cpdef dict p_scale(dict a, object c):
    if not c:
        return {}
    return {m: c * v for m, v in a.items()}


cpdef dict p_mul_term(dict a, object mono, object c):
    if not c:
        return {}
    return {m + mono: c * v for m, v in a.items()}


cpdef dict p_mul(dict a, dict b):
    cdef dict r
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 1:
        for m1, c1 in a.items():
            return {m1 + m2: c1 * c2 for m2, c2 in b.items()}
    r = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = m1 + m2
            old = r.get(m)
            if old is None:
                r[m] = c1 * c2
            else:
                r[m] = old + c1 * c2
    return {m: c for m, c in r.items() if c}


cpdef dict p_deriv(dict a, Py_ssize_t i):
    cdef Py_ssize_t sh = SHIFT * i
    unit = ONE << sh
    cdef dict r = {}
    for m, c in a.items():
        e = (m >> sh) & MASK
        if e:
            r[m - unit] = c * e
    return r


cpdef dict p_shift_derivation(dict a, dict smap):
    cdef dict r = {}
    cdef Py_ssize_t sh
    for m, c in a.items():
        mm = m
        while mm:
            sh = ((mm.bit_length() - 1) >> 4) << 4
            e = mm >> sh
            mm -= e << sh
            j = smap.get(sh >> 4)
            if j is None:
                continue
            t = m - (ONE << sh)
            if j >= 0:
                t += ONE << (SHIFT * j)
            old = r.get(t)
            if old is None:
                r[t] = c * e
            else:
                r[t] = old + c * e
    return {m: c for m, c in r.items() if c}


cpdef object p_divexact(dict a, dict b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    lm = max(b)
    lc = b[lm]
    cdef dict q = {}
    cdef dict r
    cdef list heap
    if len(b) == 1:
        for m, c in a.items():
            if not divides(lm, m) or c % lc:
                return None
            q[m - lm] = c // lc
        return q
    r = dict(a)
    heap = [-m for m in r]
    heapify(heap)
    while r:
        while True:
            m = -heap[0]
            if m in r:
                break
            heappop(heap)
        c = r[m]
        if not divides(lm, m):
            return None
        qc, rem = divmod(c, lc)
        if rem:
            return None
        dm = m - lm
        q[dm] = qc
        for mb, cb in b.items():
            t = dm + mb
            v = r.get(t, 0) - qc * cb
            if v:
                if t not in r:
                    heappush(heap, -t)
                r[t] = v
            else:
                del r[t]
    return q


cpdef object p_eval_mod(dict a, list vals, object p):
    cdef Py_ssize_t sh
    s = 0
    for m, c in a.items():
        t = c
        mm = m
        while mm:
            sh = ((mm.bit_length() - 1) >> 4) << 4
            e = mm >> sh
            mm -= e << sh
            t = t * pow(vals[sh >> 4], e, p) % p
        s += t
    return s % p


cpdef list p_univariate_mod(dict a, list vals, Py_ssize_t keep, object p):
    cdef Py_ssize_t sh_keep = SHIFT * keep
    cdef Py_ssize_t sh
    cdef dict coeffs = {}
    for m, c in a.items():
        d = (m >> sh_keep) & MASK
        mm = m - (d << sh_keep)
        t = c
        while mm:
            sh = ((mm.bit_length() - 1) >> 4) << 4
            e = mm >> sh
            mm -= e << sh
            t = t * pow(vals[sh >> 4], e, p) % p
        coeffs[d] = (coeffs.get(d, 0) + t) % p
    if not coeffs:
        return []
    cdef list out = [0] * (max(coeffs) + 1)
    for d, c in coeffs.items():
        out[d] = c
    while out and not out[len(out) - 1]:
        out.pop()
    return out


cpdef dict p_derivation(dict a, dict dmap):
    cdef dict r = {}
    cdef dict img
    cdef Py_ssize_t sh
    for m, c in a.items():
        mm = m
        while mm:
            sh = ((mm.bit_length() - 1) >> 4) << 4
            e = mm >> sh
            mm -= e << sh
            img = dmap.get(sh >> 4)
            if not img:
                continue
            base = m - (ONE << sh)
            k = c * e
            for mi, ci in img.items():
                t = base + mi
                old = r.get(t)
                if old is None:
                    r[t] = k * ci
                else:
                    r[t] = old + k * ci
    return {m: c for m, c in r.items() if c}


cpdef dict p_univariate_many_mod(dict a, list vals, object keeps, object p):
    cdef dict inv = {i: pow(vals[i], p - 2, p) for i in keeps}
    cdef dict acc = {i: {} for i in keeps}
    cdef dict ci
    cdef dict out = {}
    cdef list hits
    cdef list lst
    cdef Py_ssize_t sh, i
    total = 0
    for m, c in a.items():
        t = c % p
        hits = []
        mm = m
        while mm:
            sh = ((mm.bit_length() - 1) >> 4) << 4
            e = mm >> sh
            mm -= e << sh
            i = sh >> 4
            t = t * pow(vals[i], e, p) % p
            if i in inv:
                hits.append((i, e))
        total += t
        for i, e in hits:
            ci = acc[i]
            ci[0] = ci.get(0, 0) - t
            ci[e] = (ci.get(e, 0) + t * pow(inv[i], e, p)) % p
    for i, ci in acc.items():
        ci[0] = (ci.get(0, 0) + total) % p
        lst = [0] * (max(ci) + 1)
        for d, c in ci.items():
            lst[d] = c
        while lst and not lst[len(lst) - 1]:
            lst.pop()
        out[i] = lst
    return out
