"""Special coordinates: A = 1, B = 0, hence S = 0 and N = R.

Imposing the two normalisations and solving for the pure second y-derivatives
gives

    P[0,2] = 1 + 2Q[1,1] - R[2,0] + 3P R[0,1] + 3R P[0,1] + 3Q R[1,0] - 6Q Q[0,1]
    Q[0,2] = 2R[1,1] - 3R Q[0,1] + 6R R[1,0]

The jets P[p,0], P[p,1], Q[p,0], Q[p,1] and all R[p,q] stay free and every
other jet is a differential consequence, so the quotient ring is a free
differential algebra and zero testing after substitution is exact.

``SpecialContext`` computes directly inside that ring.  ``ReductionSystem``
is the rewrite-rule view on generic jet expressions, used for normal forms
and for the confluence tests.
"""

from __future__ import annotations

import random
import threading

from . import kernel as K
from . import poly as PL
from .contexts import Context, total_dx, total_dy
from .parse import parse, parse_or
from .rational import ZERO, RatExpr

_P02_SPECIAL = "1 + 2*Q[1,1] - R[2,0] + 3*P*R[0,1] + 3*R*P[0,1] + 3*Q*R[1,0] - 6*Q*Q[0,1]"
_Q02_SPECIAL = "2*R[1,1] - 3*R*Q[0,1] + 6*R*R[1,0]"

# the same solved forms before S = 0 is imposed
_P02_GENERIC = (
    "1 + 2*Q[1,1] - R[2,0] - 2*P*S[1,0] - S*P[1,0] + 3*P*R[0,1] + 3*R*P[0,1]"
    " + 3*Q*R[1,0] - 6*Q*Q[0,1]"
)
_Q02_GENERIC = (
    "-S[2,0] + 2*R[1,1] + 2*S*P[0,1] + P*S[0,1] - 3*S*Q[1,0] - 3*Q*S[1,0]"
    " - 3*R*Q[0,1] + 6*R*R[1,0]"
)

_LETTER_RANK = {"R": 0, "Q": 1, "P": 2, "S": 3}


def is_free(letter, p, q):
    """Whether the jet is a free generator of the special ring."""
    if letter == "S":
        return False
    if letter in "PQ":
        return q <= 1
    return True


def elimination_rank(letter, p, q):
    """Ranking used for termination: S first, then (order, letter P > Q > R)."""
    return (letter == "S", p + q, _LETTER_RANK[letter], q)


class SpecialContext(Context):
    """Differential context of the special-coordinate ring."""

    kind = "special"

    def __init__(self):
        self._lock = threading.Lock()
        self._jets = {}
        self._dy_img = {}
        self._dx_map = {}
        self._rhs = {"P": parse(_P02_SPECIAL), "Q": parse(_Q02_SPECIAL)}

    def jet(self, letter, p=0, q=0):
        if letter == "S":
            return ZERO
        if is_free(letter, p, q):
            return RatExpr.var(PL.jet_name(letter, p, q))
        key = (letter, p, q)
        v = self._jets.get(key)
        if v is None:
            if q == 2:
                v = self._rhs[letter]
                for _ in range(p):
                    v = self.dx(v)
            else:
                v = self.dy(self.jet(letter, p, q - 1))
            with self._lock:
                self._jets[key] = v
        return v

    # derivatives act on free generators only
    def _dx_poly(self, poly):
        m = self._dx_map
        missing = [i for i in PL.variables(poly) if i not in m]
        if missing:
            with self._lock:
                for i in missing:
                    m[i] = self._dx_target(i)
        return K.p_shift_derivation(poly, {i: j for i, j in m.items() if j is not None})

    @staticmethod
    def _dx_target(i):
        name = PL.REG.name(i)
        if name == "x":
            return -1
        t = PL.REG.jet(i)
        if t is None:
            return None
        L, p, q = t
        return PL.jet_index(L, p + 1, q)

    def _dy_image(self, i):
        img = self._dy_img.get(i, False)
        if img is not False:
            return img
        name = PL.REG.name(i)
        t = PL.REG.jet(i)
        if name == "y":
            img = {0: 1}
        elif t is None:
            img = None
        else:
            L, p, q = t
            e = self.jet(L, p, q + 1)
            if not e.is_polynomial() or e.c != 1:
                raise ArithmeticError("special-ring prolongation left the integer polynomials")
            img = e.n
        with self._lock:
            self._dy_img[i] = img
        return img

    def _dy_poly(self, poly):
        dmap = {}
        for i in PL.variables(poly):
            img = self._dy_image(i)
            if img:
                dmap[i] = img
        return K.p_derivation(poly, dmap)

    def dx(self, e):
        return e.derive(self._dx_poly)

    def dy(self, e):
        return e.derive(self._dy_poly)


_SPECIAL = None
_SPECIAL_LOCK = threading.Lock()


def special_context() -> SpecialContext:
    """Shared special context (its caches only grow)."""
    global _SPECIAL
    if _SPECIAL is None:
        with _SPECIAL_LOCK:
            if _SPECIAL is None:
                _SPECIAL = SpecialContext()
    return _SPECIAL


def normal_form(e, ctx: SpecialContext | None = None) -> RatExpr:
    """Replace every jet of a generic expression by its special-ring value."""
    e = parse_or(e)
    ctx = ctx or special_context()
    mapping = {}
    for i in e.var_indices():
        t = PL.REG.jet(i)
        if t is not None and not is_free(*t):
            mapping[i] = ctx.jet(*t)
    return e.subs(mapping) if mapping else e


def eliminated_jets(e: RatExpr):
    out = []
    for i in e.var_indices():
        t = PL.REG.jet(i)
        if t is not None and not is_free(*t):
            out.append(t)
    return out


class ReductionSystem:
    """Rewrite rules S[p,q] -> 0, P[p,q] -> ..., Q[p,q] -> ... for q >= 2.

    Right-hand sides are prolongations of the generic solved forms (before
    S = 0 is used), so several rewriting steps can be needed per jet.
    """

    def __init__(self):
        self._rules = {}
        self._lock = threading.Lock()
        self._base = {"P": parse(_P02_GENERIC), "Q": parse(_Q02_GENERIC)}

    def rule(self, letter, p, q) -> RatExpr:
        if letter == "S":
            return ZERO
        if is_free(letter, p, q):
            raise KeyError(f"{PL.jet_name(letter, p, q)} is not eliminated")
        key = (letter, p, q)
        r = self._rules.get(key)
        if r is None:
            if q == 2 and p == 0:
                r = self._base[letter]
            elif q > 2:
                r = total_dy(self.rule(letter, p, q - 1))
            else:
                r = total_dx(self.rule(letter, p - 1, q))
            with self._lock:
                self._rules[key] = r
        return r

    def step(self, e: RatExpr, jet) -> RatExpr:
        return e.subs({PL.jet_index(*jet): self.rule(*jet)})

    def reduce(self, e, strategy="rank", rng=None, max_steps=100000) -> RatExpr:
        """Rewrite until no eliminated jet is left.

        ``strategy`` is "rank" (highest ranked jet first) or "random".
        """
        e = parse_or(e)
        rng = rng or random.Random(0)
        for _ in range(max_steps):
            todo = eliminated_jets(e)
            if not todo:
                return e
            if strategy == "random":
                jet = rng.choice(sorted(todo))
            else:
                jet = max(todo, key=lambda t: elimination_rank(*t))
            e = self.step(e, jet)
        raise RuntimeError("reduction did not terminate")


def check_special_value(name, expected, inv=None):
    """Compare an engine quantity in special coordinates with a target.

    Returns (passed, residual).
    """
    from .engine import Invariants

    inv = inv or Invariants(special_context())
    got = inv.value(name)[0] if isinstance(name, str) else name
    residual = got - normal_form(expected)
    return residual.is_zero(), residual


def consistent_point(e, rng, lo=-9, hi=9):
    """Random values for the free jets of a special-ring expression."""
    from fractions import Fraction

    pt = {}
    for n in sorted(e.variables()):
        v = 0
        while v == 0:
            v = Fraction(rng.randint(lo, hi), rng.randint(1, 5))
        pt[n] = v
    return pt


__all__ = [
    "SpecialContext",
    "special_context",
    "ReductionSystem",
    "normal_form",
    "check_special_value",
    "is_free",
    "elimination_rank",
    "eliminated_jets",
    "consistent_point",
]
