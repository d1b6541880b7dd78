"""Exact rational functions with canonical normal forms.

A value is stored as n / (c * prod f_i^e_i) with n an integer polynomial,
c a positive integer and the f_i primitive, positive-leading, pairwise
coprime polynomials.  Invariants kept after every operation:

* gcd(n, f_i) = 1 for each factor and gcd(content(n), c) = 1;
* the expanded denominator therefore has positive leading coefficient
  under graded lex, and (numerator, expanded denominator) is the
  canonical form used for equality and hashing.

The factor list is only a cache that makes cancellation cheap; two equal
values may carry different factorizations.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import kernel as K
from . import poly as PL
from .errors import DivisionByZeroError, MalformedExpressionError, MissingBindingError, PoleError


def _key(f):
    return frozenset(f.items())


def _is_const(f):
    return not f or (len(f) == 1 and 0 in f)


def _expand(fac):
    out = {0: 1}
    for f, e in fac:
        for _ in range(e):
            out = K.p_mul(out, f)
    return out


def _split_den(p):
    """Split a nonzero polynomial into (signed int, [(factor, exp)])."""
    cont = PL.icontent(p) * PL.lc_sign(p)
    mono = PL.mono_content(p)
    fac = []
    for i, e in K.decode(mono):
        fac.append(({PL.var_mono(i): 1}, e))
    rest = PL.divide_mono(p, mono) if mono else p
    if not _is_const(rest):
        rest = {m: v // cont for m, v in rest.items()} if cont != 1 else rest
        fac.append((rest, 1))
        return cont, fac
    return rest[0], fac


def _coprime(f, g):
    vf, vg = PL.variables(f), PL.variables(g)
    shared = vf & vg
    if not shared:
        return True
    return PL.coprime_modp(f, g, shared)


def _merge(fa, fb):
    """Common coprime base of two factor lists.

    Returns a list of [f, ea, eb] with prod f^ea = prod fa, prod f^eb = prod fb.
    """
    base = [[f, e, 0] for f, e in fa]
    work = [(f, 0, e) for f, e in fb]
    while work:
        g, ea, eb = work.pop()
        if _is_const(g):
            continue
        kg = None
        for idx, item in enumerate(base):
            b = item[0]
            if len(b) == len(g):
                if kg is None:
                    kg = _key(g)
                if _key(b) == kg:
                    item[1] += ea
                    item[2] += eb
                    break
            if _coprime(b, g):
                continue
            h = PL.gcd(b, g)
            if _is_const(h):
                continue
            h = PL.canonical_associate(h)
            del base[idx]
            work.append((h, item[1] + ea, item[2] + eb))
            work.append((K.p_divexact(b, h), item[1], item[2]))
            work.append((K.p_divexact(g, h), ea, eb))
            break
        else:
            base.append([g, ea, eb])
    return [it for it in base if it[1] or it[2]]


def _strip(n, f, emax):
    """Divide n by f as often as possible (at most emax times).

    Returns (n', k, h) where h is a proper common divisor of n' and f when
    f turns out to be composite, else None.
    """
    k = 0
    while k < emax and n:
        if _coprime(n, f):
            break
        q = None
        if len(f) <= len(n) and PL.variables(f) <= PL.variables(n):
            q = K.p_divexact(n, f)
        if q is not None:
            n = q
            k += 1
            continue
        h = PL.gcd(n, f)
        if _is_const(h):
            break
        return n, k, PL.canonical_associate(h)
    return n, k, None


def _cancel(n, items, which):
    """Cancel n against base items [f, ea, eb] on exponent slot ``which``.

    Mutates items (a composite factor gets split); returns the reduced
    numerator.
    """
    i = 0
    while i < len(items):
        it = items[i]
        e = it[which]
        if e and n:
            n, k, h = _strip(n, it[0], e)
            it[which] -= k
            if h is not None:
                rest = K.p_divexact(it[0], h)
                items[i] = [h, it[1], it[2]]
                if not _is_const(rest):
                    items.insert(i + 1, [rest, it[1], it[2]])
                _dedupe(items)
                i = 0
                continue
        i += 1
    return n


def _dedupe(items):
    seen = {}
    j = 0
    while j < len(items):
        k = _key(items[j][0])
        if k in seen:
            tgt = seen[k]
            tgt[1] += items[j][1]
            tgt[2] += items[j][2]
            del items[j]
        else:
            seen[k] = items[j]
            j += 1


class RatExpr:
    """Immutable exact rational function."""

    __slots__ = ("n", "c", "fac", "_d", "_h")

    def __init__(self, n, c=1, fac=()):
        # internal constructor; public construction goes through helpers
        self.n = n
        self.c = c
        self.fac = fac
        self._d = None
        self._h = None

    # -- construction -----------------------------------------------------

    @staticmethod
    def _build(n, c, fac):
        """Normalize integer content and drop trivial factors."""
        if not n:
            return ZERO
        fac = tuple((f, e) for f, e in fac if e > 0)
        g = math.gcd(PL.icontent(n), c)
        if g != 1:
            n = {m: v // g for m, v in n.items()}
            c //= g
        return RatExpr(n, c, fac)

    @staticmethod
    def from_int(v):
        if isinstance(v, Fraction):
            return RatExpr.from_fraction(v)
        v = int(v)
        return RatExpr({0: v}) if v else ZERO

    @staticmethod
    def from_fraction(q):
        q = Fraction(q)
        if not q:
            return ZERO
        return RatExpr({0: q.numerator}, q.denominator)

    @staticmethod
    def var(name):
        return RatExpr({PL.var_mono(PL.REG.index(name)): 1})

    @staticmethod
    def from_poly(num, den=None):
        """From integer polynomial dicts (den defaults to 1)."""
        num = {m: c for m, c in num.items() if c}
        if den is None:
            return RatExpr._build(num, 1, ())
        if not den:
            raise MalformedExpressionError("zero denominator")
        return RatExpr.from_poly(num) / RatExpr.from_poly(den)

    @staticmethod
    def coerce(v):
        if isinstance(v, RatExpr):
            return v
        if isinstance(v, (int, Fraction)):
            return RatExpr.from_int(v)
        raise TypeError(f"cannot convert {type(v).__name__} to RatExpr")

    # -- accessors ----------------------------------------------------------

    def den(self):
        d = self._d
        if d is None:
            d = _expand(self.fac)
            if self.c != 1:
                d = {m: v * self.c for m, v in d.items()}
            self._d = d
        return d

    def num(self):
        return self.n

    def is_zero(self):
        return not self.n

    def is_polynomial(self):
        return not self.fac

    def is_constant(self):
        return not self.fac and _is_const(self.n)

    def constant_value(self):
        """Fraction value when constant, else None."""
        if not self.is_constant():
            return None
        return Fraction(self.n.get(0, 0), self.c)

    def variables(self):
        vs = PL.variables(self.n)
        for f, _ in self.fac:
            vs |= PL.variables(f)
        return {PL.REG.name(i) for i in vs}

    def var_indices(self):
        vs = PL.variables(self.n)
        for f, _ in self.fac:
            vs |= PL.variables(f)
        return vs

    def nterms(self):
        return len(self.n) + sum(len(f) for f, _ in self.fac)

    def __eq__(self, other):
        if not isinstance(other, RatExpr):
            try:
                other = RatExpr.coerce(other)
            except TypeError:
                return NotImplemented
        if self is other:
            return True
        if self.n != other.n:
            return False
        if self.c != other.c:
            return False
        if not self.fac and not other.fac:
            return True
        return self.den() == other.den()

    def __hash__(self):
        h = self._h
        if h is None:
            h = hash((frozenset(self.n.items()), frozenset(self.den().items())))
            self._h = h
        return h

    def __bool__(self):
        return bool(self.n)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        if not self.n:
            return self
        return RatExpr(K.p_neg(self.n), self.c, self.fac)

    def __add__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        return _add(self, other, -1)

    def __rsub__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        return _add(other, self, -1)

    def __mul__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def inverse(self):
        if not self.n:
            raise DivisionByZeroError("division by the zero expression")
        k, fac = _split_den(self.n)
        num = _expand(self.fac)
        s = self.c if k > 0 else -self.c
        num = {m: v * s for m, v in num.items()}
        return RatExpr._build(num, abs(k), fac)

    def __truediv__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        if not other.n:
            raise DivisionByZeroError("division by the zero expression")
        if not other.fac and len(other.n) == 1 and 0 in other.n:
            # division by a constant
            v = other.n[0]
            n = self.n if v > 0 else K.p_neg(self.n)
            if other.c != 1:
                n = {m: c * other.c for m, c in n.items()}
            return RatExpr._build(n, self.c * abs(v), self.fac)
        return _mul(self, other.inverse())

    def __rtruediv__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("integer exponents only")
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- calculus -------------------------------------------------------------

    def derive(self, D):
        """Apply a derivation given on integer polynomials.

        ``D`` maps a polynomial dict to its image (a derivation on Z[vars]).
        """
        if not self.fac:
            dn = D(self.n)
            return RatExpr._build(dn, self.c, ())
        n = self.n
        dn = D(n)
        live = []
        still = []
        for f, e in self.fac:
            df = D(f)
            if df:
                live.append((f, e, df))
            else:
                still.append((f, e))
        if not live:
            # dn may still share factors with the untouched denominator
            items = [[f, 0, e] for f, e in still]
            dn = _cancel(dn, items, 2)
            return RatExpr._build(dn, self.c, [(f, eb) for f, _, eb in items])
        prod_live = _expand([(f, 1) for f, _, _ in live])
        num = K.p_mul(dn, prod_live)
        for i, (f, e, df) in enumerate(live):
            others = _expand([(g, 1) for j, (g, _, _) in enumerate(live) if j != i])
            num = K.p_sub(num, K.p_scale(K.p_mul(K.p_mul(n, df), others), e))
        items = [[f, 0, e + 1] for f, e, _ in live] + [[f, 0, e] for f, e in still]
        num = _cancel(num, items, 2)
        fac = [(f, eb) for f, _, eb in items]
        return RatExpr._build(num, self.c, fac)

    def partial(self, name):
        i = PL.REG.index(name)
        return self.derive(lambda p: K.p_deriv(p, i))

    # -- evaluation and substitution ------------------------------------------

    def evaluate(self, point):
        """Exact value at ``point`` (mapping name -> rational)."""
        vals = {}
        for i in self.var_indices():
            name = PL.REG.name(i)
            if name not in point:
                raise MissingBindingError(name)
            vals[i] = Fraction(point[name])
        d = Fraction(self.c)
        for f, e in self.fac:
            fv = _eval_poly(f, vals)
            if not fv:
                raise PoleError(f"denominator vanishes at {dict(point)}")
            d *= fv ** e
        return _eval_poly(self.n, vals) / d

    def evaluate_mod(self, vals, p):
        """Value modulo a prime with vals indexed by registry index."""
        num = K.p_eval_mod(self.n, vals, p)
        den = self.c % p
        for f, e in self.fac:
            den = den * pow(K.p_eval_mod(f, vals, p), e, p) % p
        if not den:
            raise PoleError("denominator vanishes modulo p")
        return num * pow(den, p - 2, p) % p

    def subs(self, mapping):
        """Substitute variables (name or index -> RatExpr)."""
        m = {}
        for k, v in mapping.items():
            i = PL.REG.index(k) if isinstance(k, str) else k
            m[i] = RatExpr.coerce(v)
        present = self.var_indices()
        m = {i: v for i, v in m.items() if i in present}
        if not m:
            return self
        num = compose(self.n, m)
        den = RatExpr.from_int(self.c)
        for f, e in self.fac:
            den = den * compose(f, m) ** e
        return num / den

    # -- display ----------------------------------------------------------------

    def __str__(self):
        from .parse import format_expr
        return format_expr(self)

    def __repr__(self):
        return f"RatExpr({self})"


def _co(v):
    if isinstance(v, RatExpr):
        return v
    if isinstance(v, (int, Fraction)):
        return RatExpr.from_int(v)
    return NotImplemented


def _add(a, b, sign):
    if not b.n:
        return a
    if not a.n:
        return -b if sign < 0 else b
    if not a.fac and not b.fac:
        if a.c == b.c:
            n = K.p_add(a.n, b.n) if sign > 0 else K.p_sub(a.n, b.n)
            return RatExpr._build(n, a.c, ())
        L = a.c * b.c // math.gcd(a.c, b.c)
        na = K.p_scale(a.n, L // a.c)
        nb = K.p_scale(b.n, (L // b.c) * sign)
        return RatExpr._build(K.p_add(na, nb), L, ())
    items = _merge(a.fac, b.fac)
    L = a.c * b.c // math.gcd(a.c, b.c)
    ma = [(f, max(ea, eb) - ea) for f, ea, eb in items]
    mb = [(f, max(ea, eb) - eb) for f, ea, eb in items]
    na = K.p_mul(a.n, _expand(ma)) if any(e for _, e in ma) else a.n
    nb = K.p_mul(b.n, _expand(mb)) if any(e for _, e in mb) else b.n
    na = K.p_scale(na, L // a.c)
    nb = K.p_scale(nb, (L // b.c) * sign)
    n = K.p_add(na, nb)
    if not n:
        return ZERO
    # only factors with equal exponents on both sides can cancel
    work = [[f, max(ea, eb) if ea == eb else 0, max(ea, eb)] for f, ea, eb in items]
    fixed = [(f, max(ea, eb)) for f, ea, eb in items if ea != eb]
    tocheck = [[f, e1, e2] for f, e1, e2 in work if e1]
    n = _cancel(n, tocheck, 1)
    fac = fixed + [(f, e1) for f, e1, _ in tocheck]
    return RatExpr._build(n, L, fac)


def _mul(a, b):
    if not a.n or not b.n:
        return ZERO
    if not a.fac and not b.fac:
        n = K.p_mul(a.n, b.n)
        return RatExpr._build(n, a.c * b.c, ())
    na, nb = a.n, b.n
    ga = math.gcd(PL.icontent(na), b.c)
    gb = math.gcd(PL.icontent(nb), a.c)
    ca, cb = a.c, b.c
    if ga != 1:
        na = {m: v // ga for m, v in na.items()}
        cb //= ga
    if gb != 1:
        nb = {m: v // gb for m, v in nb.items()}
        ca //= gb
    if not a.fac:
        items = [[f, 0, e] for f, e in b.fac]
    elif not b.fac:
        items = [[f, e, 0] for f, e in a.fac]
    else:
        items = _merge(a.fac, b.fac)
    if b.fac:
        na = _cancel(na, items, 2)
    if a.fac:
        nb = _cancel(nb, items, 1)
    n = K.p_mul(na, nb)
    fac = [(f, ea + eb) for f, ea, eb in items]
    return RatExpr._build(n, ca * cb, fac)


def _eval_poly(f, vals):
    """Exact evaluation at rationals using a common denominator."""
    if not f:
        return Fraction(0)
    if len(f) == 1 and 0 in f:
        return Fraction(f[0])
    degs = {}
    decoded = []
    for m, c in f.items():
        items = K.decode(m)
        decoded.append((items, c))
        for i, e in items:
            if e > degs.get(i, 0):
                degs[i] = e
    npow = {}
    dpow = {}
    for i, D in degs.items():
        v = vals[i]
        a, b = v.numerator, v.denominator
        pa = [1]
        pb = [1]
        for _ in range(D):
            pa.append(pa[-1] * a)
            pb.append(pb[-1] * b)
        npow[i] = pa
        dpow[i] = pb
    total = 0
    for items, c in decoded:
        t = c
        seen = set()
        for i, e in items:
            t *= npow[i][e] * dpow[i][degs[i] - e]
            seen.add(i)
        for i, D in degs.items():
            if i not in seen:
                t *= dpow[i][D]
        total += t
    den = 1
    for i, D in degs.items():
        den *= dpow[i][D]
    return Fraction(total, den)


def compose(f, mapping):
    """f with variables replaced by RatExprs (index -> RatExpr)."""
    if not f:
        return ZERO
    degs = {}
    for m in f:
        for i, e in K.decode(m):
            if i in mapping and e > degs.get(i, 0):
                degs[i] = e
    if not degs:
        return RatExpr.from_poly(f)
    # common denominator for each substituted variable
    powers_n = {}
    powers_d = {}
    den = ONE
    for i, D in degs.items():
        v = mapping[i]
        vn = v.n
        vd = v.den()
        pn = [{0: 1}]
        pd = [{0: 1}]
        for _ in range(D):
            pn.append(K.p_mul(pn[-1], vn))
            pd.append(K.p_mul(pd[-1], vd))
        powers_n[i] = pn
        powers_d[i] = pd
        if v.fac or v.c != 1:
            den = den * RatExpr({0: 1}, v.c, v.fac) ** D
    total = {}
    for m, c in f.items():
        rest = m
        t = {0: c}
        seen = set()
        for i, e in K.decode(m):
            if i in mapping:
                rest -= e << (K.SHIFT * i)
                t = K.p_mul(t, powers_n[i][e])
                seen.add(i)
                if degs[i] - e:
                    t = K.p_mul(t, powers_d[i][degs[i] - e])
        for i, D in degs.items():
            if i not in seen:
                t = K.p_mul(t, powers_d[i][D])
        if rest:
            t = {mm + rest: v for mm, v in t.items()}
        total = K.p_add(total, t)
    return RatExpr.from_poly(total) * den


ZERO = RatExpr({}, 1, ())
ONE = RatExpr({0: 1}, 1, ())
