"""Variable registry, monomial order and integer polynomial gcd.

Polynomials here are plain dicts {packed monomial: int}.  The packed
layout (see ``kernel``) is indexed by registration order, which is an
implementation detail; every user-visible order goes through ``rank``.

Ranks: x < y < jets < anything else.  Jets are ranked by total order,
then letter (P, Q, R, S), then y-order, so lower derivatives come first.
"""

from __future__ import annotations

import math
import random
import re
import threading

from . import kernel as K

LETTERS = "PQRS"
_JET_RE = re.compile(r"^([PQRS])(?:\[(\d+),(\d+)\])?$")


def jet_name(letter, p, q):
    if p == 0 and q == 0:
        return letter
    return f"{letter}[{p},{q}]"


def parse_jet_name(name):
    """(letter, p, q) for a jet variable name, else None."""
    m = _JET_RE.match(name)
    if not m:
        return None
    if m.group(2) is None:
        return (m.group(1), 0, 0)
    return (m.group(1), int(m.group(2)), int(m.group(3)))


class Registry:
    """Append-only interning of variable names.

    Indices are shared by every expression in the process, so registration
    is serialized with a lock.  Nothing is ever removed or renumbered.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._index = {}
        self._names = []
        self._ranks = []
        self._jets = []
        self._others = 0
        for n in ("x", "y"):
            self.index(n)

    def index(self, name: str) -> int:
        i = self._index.get(name)
        if i is not None:
            return i
        with self._lock:
            i = self._index.get(name)
            if i is not None:
                return i
            jet = parse_jet_name(name)
            if name == "x":
                rank = 0
            elif name == "y":
                rank = 1
            elif jet is not None:
                L, p, q = jet
                rank = 100 + (p + q) * 100000 + LETTERS.index(L) * 1000 + q
            else:
                rank = 10**9 + self._others
                self._others += 1
            i = len(self._names)
            self._names.append(name)
            self._ranks.append(rank)
            self._jets.append(jet)
            self._index[name] = i
            return i

    def name(self, i: int) -> str:
        return self._names[i]

    def rank(self, i: int) -> int:
        return self._ranks[i]

    def jet(self, i: int):
        return self._jets[i]

    def __len__(self):
        return len(self._names)


REG = Registry()
X = REG.index("x")
Y = REG.index("y")


def jet_index(letter, p, q):
    return REG.index(jet_name(letter, p, q))


def var_mono(i, e=1):
    return e << (K.SHIFT * i)


# ---------------------------------------------------------------------------
# monomial order


def mono_items(m):
    """(index, exponent) pairs sorted by rank."""
    return sorted(K.decode(m), key=lambda t: REG.rank(t[0]))


def mono_key(m):
    """Graded lexicographic sort key over ranks."""
    items = K.decode(m)
    deg = sum(e for _, e in items)
    return (deg, tuple(sorted(((-REG.rank(i), e) for i, e in items), reverse=True)))


def leading(f):
    return max(f, key=mono_key)


def mono_degree(m):
    return sum(e for _, e in K.decode(m))


def total_degree(f):
    return max((mono_degree(m) for m in f), default=0)


def variables(f):
    """Set of variable indices occurring in f."""
    acc = 0
    for m in f:
        acc |= m
    out = set()
    while acc:
        sh = ((acc.bit_length() - 1) >> 4) << 4
        out.add(sh >> 4)
        acc &= (1 << sh) - 1
    return out


def degree_in(f, i):
    sh = K.SHIFT * i
    return max(((m >> sh) & K.MASK for m in f), default=0)


def as_univariate(f, i):
    """Split f as sum_k c_k v_i^k; returns {k: c_k}."""
    sh = K.SHIFT * i
    out = {}
    for m, c in f.items():
        k = (m >> sh) & K.MASK
        out.setdefault(k, {})[m - (k << sh)] = c
    return out


def from_univariate(u, i):
    sh = K.SHIFT * i
    out = {}
    for k, c in u.items():
        for m, v in c.items():
            out[m + (k << sh)] = v
    return out


# ---------------------------------------------------------------------------
# contents


def icontent(f):
    if not f:
        return 0
    return math.gcd(*f.values())


def mono_content(f):
    """Largest monomial dividing every term."""
    it = iter(f)
    first = next(it, 0)
    if not first:
        return 0
    cur = dict(K.decode(first))
    for m in it:
        if not cur:
            break
        for i in list(cur):
            e = (m >> (K.SHIFT * i)) & K.MASK
            if e < cur[i]:
                if e:
                    cur[i] = e
                else:
                    del cur[i]
    return sum(e << (K.SHIFT * i) for i, e in cur.items())


def mono_gcd(a, b):
    out = 0
    for i, e in K.decode(a):
        e2 = (b >> (K.SHIFT * i)) & K.MASK
        out += min(e, e2) << (K.SHIFT * i)
    return out


def lc_sign(f):
    return 1 if f[leading(f)] > 0 else -1


def canonical_associate(f):
    """Primitive, positive-leading associate of a nonzero polynomial."""
    c = icontent(f) * lc_sign(f)
    if c == 1:
        return f
    return {m: v // c for m, v in f.items()}


def divide_mono(f, m):
    return {k - m: c for k, c in f.items()}


# ---------------------------------------------------------------------------
# gcd

_P = (1 << 61) - 1
_rng = random.Random(0x5EED)
_rng_lock = threading.Lock()


def _rand_vals(n):
    with _rng_lock:
        return [_rng.randrange(2, _P - 1) for _ in range(n)]


def _uni_gcd_deg(a, b, p=_P):
    """Degree of gcd of two dense univariate polynomials mod p."""
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        inv = pow(b[-1], p - 2, p)
        a = list(a)
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            k = a[-1] * inv % p
            off = len(a) - 1 - db
            for j in range(db + 1):
                a[off + j] = (a[off + j] - k * b[j]) % p
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    return len(a) - 1


def coprime_modp(f, g, shared=None, attempts=2):
    """True only if gcd(f, g) is certainly a constant.

    A False answer is inconclusive.  The image test is sound because the
    leading coefficient in the kept variable does not vanish at the point.
    """
    if shared is None:
        shared = variables(f) & variables(g)
    if not shared:
        return True
    n = len(REG)
    for _ in range(attempts):
        vals = _rand_vals(n)
        ok = True
        fs = K.p_univariate_many_mod(f, vals, shared, _P)
        gs = K.p_univariate_many_mod(g, vals, shared, _P)
        for v in shared:
            uf = fs[v]
            if len(uf) - 1 != degree_in(f, v):
                ok = False
                break
            if _uni_gcd_deg(uf, gs[v]) > 0:
                ok = False
                break
        if ok:
            return True
    return False


def _prem(a, b, i):
    """Pseudo-remainder of a by b as univariates in variable i."""
    ua = as_univariate(a, i)
    ub = as_univariate(b, i)
    db = max(ub)
    lcb = ub[db]
    r = a
    da = max(ua) if ua else -1
    steps = da - db + 1
    sh = K.SHIFT * i
    while r:
        dr = degree_in(r, i)
        if dr < db:
            break
        ur = as_univariate(r, i)
        lcr = ur[dr]
        r = K.p_sub(K.p_mul(r, lcb), K.p_mul(K.p_mul_term(b, (dr - db) << sh, 1), lcr))
        steps -= 1
    if steps > 0 and r:
        r = K.p_mul(r, _power(lcb, steps))
    return r


def _power(f, k):
    out = {0: 1}
    for _ in range(k):
        out = K.p_mul(out, f)
    return out


def _content_in(f, i):
    coeffs = sorted(as_univariate(f, i).values(), key=len)
    g = coeffs[0]
    for c in coeffs[1:]:
        if len(g) == 1 and icontent(g) == 1 and mono_content(g) == 0:
            break
        g = gcd(g, c)
    return canonical_associate(g)


def gcd(f, g):
    """Greatest common divisor, primitive with positive leading coefficient
    (times the integer gcd of the contents)."""
    if not f:
        return {m: c * lc_sign(g) for m, c in g.items()} if g else {}
    if not g:
        return {m: c * lc_sign(f) for m, c in f.items()}
    ci = math.gcd(icontent(f), icontent(g))
    mf, mg = mono_content(f), mono_content(g)
    mo = mono_gcd(mf, mg)
    if len(f) == 1 or len(g) == 1:
        return {mo: ci}
    f = canonical_associate(divide_mono(f, mf) if mf else f)
    g = canonical_associate(divide_mono(g, mg) if mg else g)
    h = _gcd_prim(f, g)
    return {m + mo: c * ci for m, c in h.items()}


# heuristic gcd: evaluate one variable at a large integer, recurse, and
# read the gcd back from the xi-adic digits of the image

# give up (and fall back to the primitive PRS) once xi grows past this
_HEU_BITS = 1 << 17


def _eval_at(f, i, xi):
    sh = K.SHIFT * i
    pw = {}
    out = {}
    for m, c in f.items():
        e = (m >> sh) & K.MASK
        if e not in pw:
            pw[e] = xi**e
        mm = m - (e << sh)
        out[mm] = out.get(mm, 0) + c * pw[e]
    return {m: c for m, c in out.items() if c}


def _interpolate(h, i, xi):
    sh = K.SHIFT * i
    half = xi // 2
    out = {}
    k = 0
    while h:
        nxt = {}
        for m, c in h.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                out[m + (k << sh)] = r
            q = (c - r) // xi
            if q:
                nxt[m] = q
        h = nxt
        k += 1
    return out


def _maxnorm(f):
    return max(abs(c) for c in f.values())


def _primitive(f):
    c = icontent(f)
    if lc_sign(f) < 0:
        c = -c
    return {m: v // c for m, v in f.items()}


def _heu_gcd(f, g, order):
    """gcd of f and g (integer content included) or None on failure."""
    c = math.gcd(icontent(f), icontent(g))
    if c != 1:
        f = {m: v // c for m, v in f.items()}
        g = {m: v // c for m, v in g.items()}
    vs = variables(f) | variables(g)
    order = [i for i in order if i in vs]
    if not order:
        return {0: c * math.gcd(f.get(0, 0), g.get(0, 0))}
    if len(f) == 1 or len(g) == 1:
        mo = mono_gcd(mono_content(f), mono_content(g))
        return {mo: c * math.gcd(icontent(f), icontent(g))}
    v, rest = order[-1], order[:-1]
    nf, ng = _maxnorm(f), _maxnorm(g)
    B = 2 * min(nf, ng) + 29
    lf, lg = abs(f[leading(f)]), abs(g[leading(g)])
    # xi >= 2 min(|f|, |g|) + 2 makes a dividing interpolant the gcd itself
    xi = max(B, 2 * min(nf // lf, ng // lg) + 2)
    for _ in range(6):
        if xi.bit_length() > _HEU_BITS:
            return None
        ff, gg = _eval_at(f, v, xi), _eval_at(g, v, xi)
        if ff and gg:
            h = _heu_gcd(ff, gg, rest)
            if h is not None:
                H = _primitive(_interpolate(h, v, xi))
                if K.p_divexact(f, H) is not None and K.p_divexact(g, H) is not None:
                    return {m: x * c for m, x in H.items()}
                cff = K.p_divexact(ff, h)
                if cff is not None:
                    CF = _primitive(_interpolate(cff, v, xi))
                    H = K.p_divexact(f, CF)
                    if H is not None and K.p_divexact(g, H) is not None:
                        H = _primitive(H)
                        return {m: x * c for m, x in H.items()}
        xi = xi * 73794 * math.isqrt(math.isqrt(xi)) // 27011
    return None


def _gcd_prim(f, g):
    """gcd of primitive polynomials with no monomial content."""
    if f == g:
        return f
    if len(f) == 1 or len(g) == 1:
        return {0: 1}
    vf, vg = variables(f), variables(g)
    # a variable present in only one argument cannot occur in the gcd
    only = (vf - vg, vg - vf)
    for side, vs in enumerate(only):
        if vs:
            a, b = (f, g) if side == 0 else (g, f)
            v = min(vs, key=lambda i: degree_in(a, i))
            acc = b
            for c in sorted(as_univariate(a, v).values(), key=len):
                acc = gcd(acc, c)
                if len(acc) == 1:
                    return {0: 1}
            return canonical_associate(acc)
    if len(g) > len(f):
        f, g = g, f
    q = K.p_divexact(f, g)
    if q is not None:
        return g
    shared = vf & vg
    if coprime_modp(f, g, shared):
        return {0: 1}
    h = _heu_gcd(f, g, sorted(shared, key=REG.rank))
    if h is not None:
        return canonical_associate(h)
    v = min(shared, key=lambda i: (min(degree_in(f, i), degree_in(g, i)), REG.rank(i)))
    cf, cg = _content_in(f, v), _content_in(g, v)
    c = gcd(cf, cg)
    a = K.p_divexact(f, cf) if len(cf) > 1 else f
    b = K.p_divexact(g, cg) if len(cg) > 1 else g
    if degree_in(a, v) < degree_in(b, v):
        a, b = b, a
    if degree_in(b, v) == 0:
        return canonical_associate(c)
    while True:
        r = _prem(a, b, v)
        if not r:
            pp = b
            break
        if degree_in(r, v) == 0:
            pp = {0: 1}
            break
        r = K.p_divexact(r, _content_in(r, v))
        a, b = b, r
    return canonical_associate(K.p_mul(pp, c))
