"""Jet variables, total derivatives and instantiation."""

from __future__ import annotations

from dataclasses import dataclass

from . import poly as PL
from .contexts import ConcreteContext, OdeCoefficients, total_dx, total_dy
from .rational import RatExpr


@dataclass(frozen=True, order=True)
class JetVariable:
    letter: str
    p: int = 0
    q: int = 0

    def __post_init__(self):
        if self.letter not in PL.LETTERS or self.p < 0 or self.q < 0:
            raise ValueError(f"bad jet {self.letter}[{self.p},{self.q}]")

    @property
    def name(self):
        return PL.jet_name(self.letter, self.p, self.q)

    @property
    def order(self):
        return self.p + self.q

    def expr(self) -> RatExpr:
        return RatExpr.var(self.name)

    @classmethod
    def from_name(cls, name):
        t = PL.parse_jet_name(name)
        if t is None:
            raise ValueError(f"not a jet name: {name!r}")
        return cls(*t)


def jet(letter, p=0, q=0) -> RatExpr:
    return RatExpr.var(PL.jet_name(letter, p, q))


def jet_variables(e: RatExpr):
    """Jet variables occurring in e, sorted by rank."""
    out = []
    for i in sorted(e.var_indices(), key=PL.REG.rank):
        t = PL.REG.jet(i)
        if t is not None:
            out.append(JetVariable(*t))
    return out


def order(e: RatExpr) -> int:
    """Highest derivative order of a jet occurring in e (-1 if none)."""
    return max((v.order for v in jet_variables(e)), default=-1)


def total_derivative(e: RatExpr, direction: str) -> RatExpr:
    """Total derivative in x or y; jets shift their dot index."""
    if direction == "x":
        return total_dx(e)
    if direction == "y":
        return total_dy(e)
    raise ValueError("direction must be 'x' or 'y'")


def instantiate(e: RatExpr, ode: OdeCoefficients, ctx=None) -> RatExpr:
    """Replace every jet by the matching derivative of the coefficients."""
    ctx = ctx or ConcreteContext(ode)
    mapping = {}
    for v in jet_variables(e):
        mapping[PL.REG.index(v.name)] = ctx.jet(v.letter, v.p, v.q)
    return e.subs(mapping) if mapping else e
