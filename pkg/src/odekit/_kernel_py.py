"""Pure-Python sparse polynomial kernels.

A polynomial is a dict mapping a packed monomial to a nonzero int.
Exponent vectors are packed into one Python int with 16 bits per
variable, so multiplying monomials is integer addition.  Exponents must
stay below 2**15; the top bit of each field is a guard used by the
divisibility test.

The compiled module ``_kernel`` exposes the same functions.
"""

from heapq import heapify, heappop, heappush

SHIFT = 16
MASK = 0xFFFF

_guards = [0]


def guard(nfields):
    while len(_guards) <= nfields:
        k = len(_guards) - 1
        _guards.append(_guards[-1] | (1 << (SHIFT * k + SHIFT - 1)))
    return _guards[nfields]


def divides(m1, m2):
    """True when monomial m1 divides m2."""
    if m1 > m2:
        return False
    g = guard((m2.bit_length() >> 4) + 1)
    return ((m2 | g) - m1) & g == g


def decode(m):
    """List of (index, exponent) pairs of a packed monomial."""
    out = []
    while m:
        sh = ((m.bit_length() - 1) >> 4) << 4
        e = m >> sh
        m -= e << sh
        out.append((sh >> 4, e))
    return out


def p_add(a, b):
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


def p_sub(a, b):
    r = dict(a)
    for m, c in b.items():
        v = r.get(m, 0) - c
        if v:
            r[m] = v
        else:
            del r[m]
    return r


def p_neg(a):
    return {m: -c for m, c in a.items()}


def p_scale(a, c):
    if not c:
        return {}
    return {m: c * v for m, v in a.items()}


def p_mul_term(a, mono, c):
    if not c:
        return {}
    return {m + mono: c * v for m, v in a.items()}


def p_mul(a, b):
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 1:
        for m1, c1 in a.items():
            return {m1 + m2: c1 * c2 for m2, c2 in b.items()}
    r = {}
    get = r.get
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = m1 + m2
            r[m] = get(m, 0) + c1 * c2
    return {m: c for m, c in r.items() if c}


def p_deriv(a, i):
    """Partial derivative with respect to variable index i."""
    sh = SHIFT * i
    unit = 1 << sh
    r = {}
    for m, c in a.items():
        e = (m >> sh) & MASK
        if e:
            r[m - unit] = c * e
    return r


def p_shift_derivation(a, smap):
    """Derivation where each mapped variable i goes to variable smap[i].

    smap[i] == -1 means the derivative of variable i is the constant 1.
    Unmapped variables are treated as constants.
    """
    r = {}
    get = r.get
    for m, c in a.items():
        mm = m
        while mm:
            sh = ((mm.bit_length() - 1) >> 4) << 4
            e = mm >> sh
            mm -= e << sh
            j = smap.get(sh >> 4)
            if j is None:
                continue
            t = m - (1 << sh)
            if j >= 0:
                t += 1 << (SHIFT * j)
            r[t] = get(t, 0) + c * e
    return {m: c for m, c in r.items() if c}


def p_divexact(a, b):
    """Exact quotient a/b, or None when b does not divide a."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    lm = max(b)
    lc = b[lm]
    if len(b) == 1:
        q = {}
        for m, c in a.items():
            if not divides(lm, m) or c % lc:
                return None
            q[m - lm] = c // lc
        return q
    r = dict(a)
    heap = [-m for m in r]
    heapify(heap)
    q = {}
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


def p_eval_mod(a, vals, p):
    """Evaluate at integer values vals[i] modulo p (all variables bound)."""
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


def p_univariate_mod(a, vals, keep, p):
    """Specialize every variable except ``keep`` modulo p.

    Returns a dense coefficient list, lowest degree first.
    """
    sh_keep = SHIFT * keep
    coeffs = {}
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
    out = [0] * (max(coeffs) + 1)
    for d, c in coeffs.items():
        out[d] = c
    while out and not out[-1]:
        out.pop()
    return out


def p_derivation(a, dmap):
    """Derivation sending variable i to the polynomial dmap[i].

    Variables missing from dmap are constants.
    """
    r = {}
    get = r.get
    for m, c in a.items():
        mm = m
        while mm:
            sh = ((mm.bit_length() - 1) >> 4) << 4
            e = mm >> sh
            mm -= e << sh
            img = dmap.get(sh >> 4)
            if not img:
                continue
            base = m - (1 << sh)
            k = c * e
            for mi, ci in img.items():
                t = base + mi
                r[t] = get(t, 0) + k * ci
    return {m: c for m, c in r.items() if c}


def p_univariate_many_mod(a, vals, keeps, p):
    """p_univariate_mod for every variable in ``keeps`` in one pass.

    Each term is evaluated once; the kept variable's power is divided
    back out with a modular inverse (vals must be units mod p).
    """
    inv = {i: pow(vals[i], p - 2, p) for i in keeps}
    acc = {i: {} for i in keeps}
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
    out = {}
    for i, ci in acc.items():
        ci[0] = (ci.get(0, 0) + total) % p
        lst = [0] * (max(ci) + 1)
        for d, c in ci.items():
            lst[d] = c
        while lst and not lst[-1]:
            lst.pop()
        out[i] = lst
    return out
