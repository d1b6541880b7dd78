"""Shared helpers: sympy bridge, independent oracle, strategies."""

from __future__ import annotations

import re
from fractions import Fraction

import sympy as sp
from hypothesis import strategies as st

from odekit import kernel as K
from odekit import poly as PL
from odekit.parse import format_expr
from odekit.rational import RatExpr

x, y = sp.symbols("x y")

_JET = re.compile(r"\b([PQRS])(?:\[(\d+),(\d+)\])?")


def _sym_name(m):
    return f"j{m[1]}_{m[2] or 0}_{m[3] or 0}"


def to_sympy(e: RatExpr):
    text = _JET.sub(_sym_name, format_expr(e)).replace("^", "**")
    names = set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text))
    return sp.sympify(text, locals={n: sp.Symbol(n) for n in names})


def same_function(e: RatExpr, s) -> bool:
    return sp.cancel(to_sympy(e) - s) == 0


# ---------------------------------------------------------------------------
# oracle: the explicit closed formulas, written with sympy from scratch


def oracle(P, Q, R, S, branch="A", cancel=True):
    """A, B, G, H, F5, N, M, Omega, phi by direct differentiation.

    Only the closed forms are used here, none of the library's
    ladder or tensor machinery.  With cancel=False the results are left
    unsimplified (sympy's cancel is slow on big rational coefficients)."""
    simp = sp.cancel if cancel else (lambda e: e)
    P, Q, R, S = (sp.sympify(v) for v in (P, Q, R, S))

    def d(f, p, q):
        return sp.diff(f, x, p, y, q) if p or q else f

    A = (d(P, 0, 2) - 2 * d(Q, 1, 1) + d(R, 2, 0) + 2 * P * d(S, 1, 0) + S * d(P, 1, 0)
         - 3 * P * d(R, 0, 1) - 3 * R * d(P, 0, 1) - 3 * Q * d(R, 1, 0) + 6 * Q * d(Q, 0, 1))
    B = (d(S, 2, 0) - 2 * d(R, 1, 1) + d(Q, 0, 2) - 2 * S * d(P, 0, 1) - P * d(S, 0, 1)
         + 3 * S * d(Q, 1, 0) + 3 * Q * d(S, 1, 0) + 3 * R * d(Q, 0, 1) - 6 * R * d(R, 1, 0))
    A, B = sp.cancel(A), sp.cancel(B)
    A10, A01, B10, B01 = d(A, 1, 0), d(A, 0, 1), d(B, 1, 0), d(B, 0, 1)
    G = -B * B10 - 3 * A * B01 + 4 * B * A01 + 3 * S * A**2 - 6 * R * B * A + 3 * Q * B**2
    H = -A * A01 - 3 * B * A10 + 4 * A * B10 - 3 * P * B**2 + 6 * Q * A * B - 3 * R * A**2
    F5 = (A * B * A01 + B * A * B10 - A**2 * B01 - B**2 * A10
          - P * B**3 + 3 * Q * A * B**2 - 3 * R * A**2 * B + S * A**3)
    out = dict(A=A, B=B, G=sp.cancel(G), H=sp.cancel(H), F5=sp.cancel(F5))
    if out["F5"] != 0 or (A == 0 and B == 0):
        return out
    r = sp.Rational
    if branch == "A":
        N = simp(-H / (3 * A))
        N10, N01 = d(N, 1, 0), d(N, 0, 1)
        M = (-12 * B * N * (B * P + A10) / (5 * A) + B * N10 + r(24, 5) * B * N * Q
             + r(6, 5) * N * B10 + r(6, 5) * N * A01 - A * N01 - r(12, 5) * A * N * R)
        Om = (2 * B * A10 * (B * P + A10) / A**3 - (2 * B10 + 3 * B * Q) * A10 / A**2
              + (A01 - 2 * B10) * B * P / A**2 - (B * d(A, 2, 0) + B**2 * d(P, 1, 0)) / A**2
              + d(B, 2, 0) / A + (3 * B10 * Q + 3 * B * d(Q, 1, 0) - B01 * P - B * d(P, 0, 1)) / A
              + d(Q, 0, 1) - 2 * d(R, 1, 0))
        phi = (-3 * (B * P + A10) / (5 * A) + r(3, 5) * Q,
               3 * B * (B * P + A10) / (5 * A**2) - 3 * (B10 + A01 + 3 * B * Q) / (5 * A)
               + r(6, 5) * R)
    else:
        N = simp(G / (3 * B))
        N10, N01 = d(N, 1, 0), d(N, 0, 1)
        M = (-12 * A * N * (A * S - B01) / (5 * B) - A * N01 + r(24, 5) * A * N * R
             - r(6, 5) * N * A01 - r(6, 5) * N * B10 + B * N10 - r(12, 5) * B * N * Q)
        Om = (2 * A * B01 * (A * S - B01) / B**3 + (2 * A01 - 3 * A * R) * B01 / B**2
              + (B10 - 2 * A01) * A * S / B**2 + (A * d(B, 0, 2) - A**2 * d(S, 0, 1)) / B**2
              - d(A, 0, 2) / B + (3 * A01 * R + 3 * A * d(R, 0, 1) - A10 * S - A * d(S, 1, 0)) / B
              + d(R, 1, 0) - 2 * d(Q, 0, 1))
        phi = None
    out.update(N=N, M=simp(M), Omega=simp(Om))
    if phi is not None:
        out["phi"] = tuple(simp(v) for v in phi)
    return out


# ---------------------------------------------------------------------------
# strategies

SMALL = st.integers(min_value=-20, max_value=20)
NAMES = ("x", "y", "P", "Q[0,1]", "R[1,0]")
IDX = [PL.REG.index(n) for n in NAMES]


@st.composite
def raw_polys(draw, max_terms=6, max_exp=3, nvars=len(NAMES)):
    """Kernel-level polynomial dicts over a few registry variables."""
    n = draw(st.integers(0, max_terms))
    out = {}
    for _ in range(n):
        m = 0
        for i in IDX[:nvars]:
            m += draw(st.integers(0, max_exp)) << (K.SHIFT * i)
        c = draw(SMALL)
        out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


@st.composite
def polys(draw, **kw):
    return RatExpr.from_poly(draw(raw_polys(**kw)))


@st.composite
def nonzero_polys(draw, **kw):
    p = draw(polys(**kw))
    return p if not p.is_zero() else RatExpr.from_int(draw(st.integers(1, 9)))


@st.composite
def ratexprs(draw):
    return draw(polys(max_terms=4, max_exp=2)) / draw(nonzero_polys(max_terms=3, max_exp=2))


points = st.fixed_dictionaries(
    {n: st.fractions(min_value=-5, max_value=5, max_denominator=7) for n in NAMES})


JET_NAMES = ("P", "Q", "R", "S", "P[0,1]", "Q[1,0]", "R[0,1]", "S[1,1]", "Q[2,0]")


@st.composite
def jet_exprs(draw, names=JET_NAMES, max_terms=4):
    """Random polynomials in x, y and a few jets (optionally over a jet denominator)."""
    vs = ("x", "y") + tuple(names)
    n = draw(st.integers(1, max_terms))
    e = RatExpr.from_int(0)
    for _ in range(n):
        t = RatExpr.from_int(draw(st.integers(-5, 5)))
        for v in draw(st.lists(st.sampled_from(vs), max_size=3)):
            t = t * RatExpr.var(v)
        e = e + t
    if draw(st.booleans()):
        d = RatExpr.var(draw(st.sampled_from(names))) + draw(st.integers(1, 3))
        e = e / d
    return e


def frac(a, b=1):
    return Fraction(a, b)
