"""Differential contexts.

A context answers three questions: what is the jet f_{p.q} of a
coefficient, and how do the two coordinate derivatives act.  Every
formula in the engine is written once against this interface.

GenericContext   jets are free indeterminates (identity checking)
ConcreteContext  P, Q, R, S are rational functions of x, y
PulledBackContext  a concrete equation written in transformed coordinates,
                 with every function kept in the original x, y
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from . import kernel as K
from . import poly as PL
from .errors import MalformedExpressionError
from .parse import parse_or
from .rational import ONE, ZERO, RatExpr

LETTERS = PL.LETTERS


@dataclass(frozen=True)
class OdeCoefficients:
    """The quadruple (P, Q, R, S) of y'' = P + 3Q y' + 3R y'^2 + S y'^3."""

    P: RatExpr
    Q: RatExpr
    R: RatExpr
    S: RatExpr

    @classmethod
    def of(cls, P=0, Q=0, R=0, S=0):
        vals = [parse_or(v) for v in (P, Q, R, S)]
        for v in vals:
            extra = v.variables() - {"x", "y"}
            if extra:
                raise MalformedExpressionError(
                    f"coefficients may only use x and y, found {sorted(extra)}"
                )
        return cls(*vals)

    def __getitem__(self, letter):
        return getattr(self, letter)

    def as_dict(self):
        return {L: str(self[L]) for L in LETTERS}

    def __str__(self):
        return ", ".join(f"{L} = {self[L]}" for L in LETTERS)


class Context:
    kind = "abstract"

    def jet(self, letter, p=0, q=0) -> RatExpr:
        raise NotImplementedError

    def dx(self, e: RatExpr) -> RatExpr:
        raise NotImplementedError

    def dy(self, e: RatExpr) -> RatExpr:
        raise NotImplementedError

    def d(self, e, k):
        """Derivative along coordinate k (1 = x, 2 = y)."""
        return self.dx(e) if k == 1 else self.dy(e)

    def const(self, v):
        return RatExpr.from_int(Fraction(v))

    def is_zero(self, e):
        return e.is_zero()


# ---------------------------------------------------------------------------


class _ShiftMaps:
    """Index maps for total derivatives on free jets, built lazily."""

    def __init__(self):
        self.lock = threading.Lock()
        self.maps = ({}, {})

    def get(self, poly, direction):
        m = self.maps[direction]
        missing = [i for i in PL.variables(poly) if i not in m]
        if missing:
            with self.lock:
                for i in missing:
                    m[i] = self._target(i, direction)
        return m

    @staticmethod
    def _target(i, direction):
        name = PL.REG.name(i)
        if name == "x":
            return -1 if direction == 0 else None
        if name == "y":
            return -1 if direction == 1 else None
        jet = PL.REG.jet(i)
        if jet is None:
            return None
        L, p, q = jet
        if direction == 0:
            return PL.jet_index(L, p + 1, q)
        return PL.jet_index(L, p, q + 1)


_SHIFT = _ShiftMaps()


def _shift_derivation(direction):
    def D(poly):
        smap = _SHIFT.get(poly, direction)
        smap = {i: j for i, j in smap.items() if j is not None}
        return K.p_shift_derivation(poly, smap)

    return D


_DX = _shift_derivation(0)
_DY = _shift_derivation(1)


def total_dx(e: RatExpr) -> RatExpr:
    return e.derive(_DX)


def total_dy(e: RatExpr) -> RatExpr:
    return e.derive(_DY)


class GenericContext(Context):
    """Free jet indeterminates P[p,q], ..., S[p,q]."""

    kind = "generic"

    def jet(self, letter, p=0, q=0):
        return RatExpr.var(PL.jet_name(letter, p, q))

    def dx(self, e):
        return total_dx(e)

    def dy(self, e):
        return total_dy(e)


# ---------------------------------------------------------------------------


class ConcreteContext(Context):
    """Coefficients given as rational functions of x and y."""

    kind = "concrete"

    def __init__(self, ode: OdeCoefficients):
        self.ode = ode
        self._jets = {}
        self._lock = threading.Lock()

    def dx(self, e):
        return e.derive(lambda p: K.p_deriv(p, PL.X))

    def dy(self, e):
        return e.derive(lambda p: K.p_deriv(p, PL.Y))

    def jet(self, letter, p=0, q=0):
        key = (letter, p, q)
        v = self._jets.get(key)
        if v is not None:
            return v
        if p == 0 and q == 0:
            v = self.ode[letter]
        elif p > 0:
            v = self.dx(self.jet(letter, p - 1, q))
        else:
            v = self.dy(self.jet(letter, 0, q - 1))
        with self._lock:
            self._jets[key] = v
        return v

    def evaluate(self, e, point):
        return e.evaluate(point)


class PulledBackContext(ConcreteContext):
    """Concrete equation in coordinates (xt, yt), expressed through (x, y).

    Derivatives along the new coordinates are
        d/dxt = (yt_y d/dx - yt_x d/dy) / det,
        d/dyt = (-xt_y d/dx + xt_x d/dy) / det,
    where det is the Jacobian determinant of (xt, yt).
    """

    kind = "pulled-back"

    def __init__(self, ode: OdeCoefficients, xt: RatExpr, yt: RatExpr):
        super().__init__(ode)
        base = ConcreteContext(ode)
        self.xt, self.yt = xt, yt
        self.xx, self.xy = base.dx(xt), base.dy(xt)
        self.yx, self.yy = base.dx(yt), base.dy(yt)
        self.det = self.xx * self.yy - self.xy * self.yx
        self._base = base

    def dx(self, e):
        b = self._base
        return (self.yy * b.dx(e) - self.yx * b.dy(e)) / self.det

    def dy(self, e):
        b = self._base
        return (self.xx * b.dy(e) - self.xy * b.dx(e)) / self.det


__all__ = [
    "OdeCoefficients",
    "Context",
    "GenericContext",
    "ConcreteContext",
    "PulledBackContext",
    "total_dx",
    "total_dy",
    "ONE",
    "ZERO",
]
