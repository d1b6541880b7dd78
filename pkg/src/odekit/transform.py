"""Point transformations xt = xt(x, y), yt = yt(x, y).

T is the Jacobian of the direct map (rows xt, yt; columns d/dx, d/dy) and
S its inverse, the Jacobian of the inverse map.  A field of type (r, s)
and weight m obeys

    F(x) = (det T)^m  S...S  T...T  F~(xt(x))

with one S per upper and one T per lower index.

Transformed coefficients are produced "pulled back": as functions of the
old x, y, standing for the new coefficients at the image point.  When an
inverse is known they can be composed into genuine functions of xt, yt.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .contexts import ConcreteContext, OdeCoefficients, PulledBackContext
from .engine import Invariants
from .errors import (
    CaseViolationError,
    InvalidTransformationError,
    OdekitError,
    PoleError,
)
from .parse import parse_or
from .rational import ONE, ZERO, RatExpr
from .tensors import PseudoTensor, index_set

MAX_RETRIES = 100

_X = RatExpr.var("x")
_Y = RatExpr.var("y")


def _is_const(e):
    return e.is_constant()


@dataclass(frozen=True)
class PointTransformation:
    xt: RatExpr
    yt: RatExpr
    x_inv: RatExpr | None = None
    y_inv: RatExpr | None = None

    @classmethod
    def of(cls, xt, yt, x_inv=None, y_inv=None):
        xt, yt = parse_or(xt), parse_or(yt)
        for e in (xt, yt):
            if e.variables() - {"x", "y"}:
                raise InvalidTransformationError("maps may only use x and y")
        inv = [None if v is None else parse_or(v) for v in (x_inv, y_inv)]
        t = cls(xt, yt, *inv)
        if t.det.is_zero():
            raise InvalidTransformationError(
                f"Jacobian determinant of ({xt}, {yt}) vanishes identically")
        if t.x_inv is None:
            found = closed_form_inverse(xt, yt)
            if found is not None:
                t = cls(xt, yt, *found)
        return t

    @classmethod
    def identity(cls):
        return cls.of("x", "y")

    # Jacobians as functions of the old coordinates
    @property
    def T(self):
        c = ConcreteContext(OdeCoefficients(ZERO, ZERO, ZERO, ZERO))
        return ((c.dx(self.xt), c.dy(self.xt)), (c.dx(self.yt), c.dy(self.yt)))

    @property
    def det(self):
        (a, b), (c, d) = self.T
        return a * d - b * c

    @property
    def S(self):
        (a, b), (c, d) = self.T
        det = self.det
        return ((d / det, -b / det), (-c / det, a / det))

    def compose_after(self, first: "PointTransformation") -> "PointTransformation":
        """self o first."""
        m = {"x": first.xt, "y": first.yt}
        return PointTransformation.of(self.xt.subs(m), self.yt.subs(m))

    def apply(self, point):
        return {"x": self.xt.evaluate(point), "y": self.yt.evaluate(point)}

    def has_inverse(self):
        return self.x_inv is not None and self.y_inv is not None

    def check_inverse(self, rng=None, trials=5):
        """Compose with the stored inverse at random points."""
        if not self.has_inverse():
            return False
        rng = rng or random.Random(0)
        for _ in range(trials):
            pt = sample_point(rng, [self.xt, self.yt])
            img = self.apply(pt)
            back = {"x": self.x_inv.evaluate(img), "y": self.y_inv.evaluate(img)}
            if back != pt:
                return False
        return True


def _affine_parts(e):
    """(a, b, c) with e = a x + b y + c, or None."""
    if not e.is_polynomial():
        return None
    a, b = e.partial("x"), e.partial("y")
    if not (_is_const(a) and _is_const(b)):
        return None
    c = e - a * _X - b * _Y
    return a, b, c


def closed_form_inverse(xt, yt):
    """Inverse of affine and triangular maps; None otherwise."""
    fa, fb = _affine_parts(xt), _affine_parts(yt)
    if fa and fb:
        a, b, e = fa
        c, d, f = fb
        det = a * d - b * c
        if det.is_zero():
            return None
        u, v = _X - e, _Y - f
        return (d * u - b * v) / det, (a * v - c * u) / det
    # yt = c y + k, xt = a x + g(y)
    if fb and fb[0].is_zero() and not fb[1].is_zero():
        ax = xt.partial("x")
        g = xt - ax * _X
        if _is_const(ax) and not ax.is_zero() and g.variables() <= {"y"}:
            yinv = (_Y - fb[2]) / fb[1]
            return (_X - g.subs({"y": yinv})) / ax, yinv
    # xt = a x + k, yt = c y + g(x)
    if fa and fa[1].is_zero() and not fa[0].is_zero():
        cy = yt.partial("y")
        g = yt - cy * _Y
        if _is_const(cy) and not cy.is_zero() and g.variables() <= {"x"}:
            xinv = (_X - fa[2]) / fa[0]
            return xinv, (_Y - g.subs({"x": xinv})) / cy
    return None


# ---------------------------------------------------------------------------
# coefficients


def _lin_mul(p, lin):
    """Multiply a form in (d, n), given by coefficient list, by a linear form."""
    out = [ZERO] * (len(p) + 1)
    for k, c in enumerate(p):
        out[k] = out[k] + c * lin[0]
        out[k + 1] = out[k + 1] + c * lin[1]
    return out


def transform_pulled(ode: OdeCoefficients, t: PointTransformation) -> OdeCoefficients:
    """Coefficients of the transformed equation, written in the old x, y.

    With p = y', the new slope is n/d where d = xt_x + xt_y p and
    n = yt_x + yt_y p.  Then yt'' = (d Dn - n Dd) / d^3, a cubic in p; it
    is re-expanded in the basis d^3, d^2 n, d n^2, n^3.
    """
    (ux, uy), (vx, vy) = t.T
    det = t.det
    c = ConcreteContext(ode)
    P, Q, R, S = ode.P, ode.Q, ode.R, ode.S
    ypp = [P, 3 * Q, 3 * R, S]  # y'' as cubic in p

    def second(f):
        return c.dx(c.dx(f)), c.dx(c.dy(f)), c.dy(c.dy(f))

    uxx, uxy, uyy = second(t.xt)
    vxx, vxy, vyy = second(t.yt)
    # D(a + b p) = a_x + (a_y + b_x) p + b_y p^2 + b y''
    Dd = [uxx, 2 * uxy, uyy, ZERO]
    Dn = [vxx, 2 * vxy, vyy, ZERO]
    for k in range(4):
        Dd[k] = Dd[k] + uy * ypp[k]
        Dn[k] = Dn[k] + vy * ypp[k]
    d = [ux, uy]
    n = [vx, vy]
    num = [ZERO] * 4
    for i in range(2):
        for j in range(4):
            if i + j < 4:
                num[i + j] = num[i + j] + d[i] * Dn[j] - n[i] * Dd[j]
    # 1 and p as linear forms in (d, n)
    one = (vy / det, -uy / det)
    pp = (-vx / det, ux / det)
    out = [ZERO] * 4
    for k in range(4):
        if num[k].is_zero():
            continue
        form = [num[k]]
        for _ in range(k):
            form = _lin_mul(form, pp)
        for _ in range(3 - k):
            form = _lin_mul(form, one)
        for j in range(4):
            out[j] = out[j] + form[j]
    return OdeCoefficients(out[0], out[1] / 3, out[2] / 3, out[3])


def transform_ode(ode: OdeCoefficients, t: PointTransformation) -> OdeCoefficients:
    """Transformed equation as functions of the new coordinates (named x, y)."""
    if not t.has_inverse():
        raise InvalidTransformationError(
            "an inverse map is needed to express the result in the new coordinates; "
            "supply x_inv and y_inv or use transform_pulled")
    pulled = transform_pulled(ode, t)
    m = {"x": t.x_inv, "y": t.y_inv}
    return OdeCoefficients(*(pulled[L].subs(m) for L in "PQRS"))


def pulled_back_context(ode, t):
    """Context of the transformed equation with everything in the old x, y."""
    return PulledBackContext(transform_pulled(ode, t), t.xt, t.yt)


# ---------------------------------------------------------------------------
# pseudotensor law


def transform_pseudotensor(new: PseudoTensor, T, S, det=None) -> PseudoTensor:
    """Old components from new ones by the transformation law.

    T and S are 2x2 nested sequences (numbers or expressions).
    """
    if det is None:
        det = T[0][0] * T[1][1] - T[0][1] * T[1][0]
    scale = det ** new.weight if new.weight >= 0 else 1 / det ** (-new.weight)
    r, s = new.r, new.s
    out = {}
    for idx in index_set(r + s):
        total = 0
        for src in index_set(r + s):
            f = new.components[src]
            if not f:
                continue
            k = 1
            for n in range(r):
                k = k * S[idx[n] - 1][src[n] - 1]
            for n in range(r, r + s):
                k = k * T[src[n] - 1][idx[n] - 1]
            total = total + k * f
        out[idx] = scale * total
    return PseudoTensor(r, s, new.weight, out, new.name)


def sample_point(rng, exprs, lo=-6, hi=6, maxden=4):
    """Random small-rational point at which every expression is finite."""
    for _ in range(MAX_RETRIES):
        pt = {"x": Fraction(rng.randint(lo, hi), rng.randint(1, maxden)),
              "y": Fraction(rng.randint(lo, hi), rng.randint(1, maxden))}
        try:
            for e in exprs:
                e.evaluate(pt)
        except PoleError:
            continue
        return pt
    raise PoleError(f"no admissible point after {MAX_RETRIES} retries")


def _num_matrix(M, pt):
    return [[M[i][j].evaluate(pt) for j in range(2)] for i in range(2)]


# fields checked by the weight law: name -> (builder on Invariants, r, s, weight)
FIELDS = {
    "F5": (lambda I: [I.F5], 0, 0, 5),
    "alpha": (lambda I: [I.A, I.B], 0, 1, 1),
    "alpha_vec": (lambda I: [I.alpha_vector()[1], I.alpha_vector()[2]], 1, 0, 2),
    "beta": (lambda I: [-I.H, I.G], 0, 1, 3),
    "beta_vec": (lambda I: [I.beta_vector()[1], I.beta_vector()[2]], 1, 0, 4),
    "N": (lambda I: [I.N], 0, 0, 2),
    "Omega": (lambda I: [I.Omega], 0, 0, 1),
    "M": (lambda I: [I.M], 0, 0, 4),
    "gamma": (lambda I: list(I.gamma_cov), 0, 1, 2),
    "detR": (lambda I: [I.detR], 0, 0, 2),
    "trR": (lambda I: [I.trR], 0, 0, 1),
    "I1": (lambda I: [I.I1], 0, 0, 0),
    "I2": (lambda I: [I.I2], 0, 0, 0),
    "I3": (lambda I: [I.I3], 0, 0, 0),
}


def _as_tensor(vals, r, s, w, name):
    return PseudoTensor(r, s, w, dict(zip(index_set(r + s), vals)), name)


@dataclass
class WeightReport:
    field: str
    weight: int
    trials: int
    failures: list

    @property
    def passed(self):
        return not self.failures


def weight_check(ode, t, field, trials=20, seed=0, weight=None) -> WeightReport:
    """Check the transformation law for one field at random points."""
    build, r, s, w = FIELDS[field]
    if weight is not None:
        w = weight
    old = build(Invariants(ConcreteContext(ode)))
    new = build(Invariants(pulled_back_context(ode, t)))
    rng = random.Random(seed)
    Tm, Sm = t.T, t.S
    exprs = list(old) + list(new) + [t.det] + [e for row in Tm for e in row]
    failures = []
    for _ in range(trials):
        pt = sample_point(rng, exprs)
        T = _num_matrix(Tm, pt)
        S = _num_matrix(Sm, pt)
        lhs = [e.evaluate(pt) for e in old]
        rhs = transform_pseudotensor(_as_tensor([e.evaluate(pt) for e in new], r, s, w, field),
                                     T, S).values()
        if lhs != rhs:
            failures.append((pt, lhs, rhs))
    return WeightReport(field, w, trials, failures)


def check_phi_rule(ode, t, trials=20, seed=0):
    """phi_i = sum_j T^j_i phi~_j - d ln det T / dx^i at random points.

    Returns a list of failing points (empty on success).
    """
    old = Invariants(ConcreteContext(ode))
    if not old.F5.is_zero():
        raise CaseViolationError("F = 0", "phi is only defined for intermediate degeneration")
    new = Invariants(pulled_back_context(ode, t))
    c = ConcreteContext(ode)
    det = t.det
    corr = (c.dx(det) / det, c.dy(det) / det)
    Tm = t.T
    lhs = old.phi
    rhs = []
    for i in range(2):
        rhs.append(Tm[0][i] * new.phi[0] + Tm[1][i] * new.phi[1] - corr[i])
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        pt = sample_point(rng, list(lhs) + rhs)
        a = [e.evaluate(pt) for e in lhs]
        b = [e.evaluate(pt) for e in rhs]
        if a != b:
            bad.append((pt, a, b))
    return bad


def random_transformation(rng) -> PointTransformation:
    """Random invertible affine or triangular map with small coefficients."""
    while True:
        kind = rng.choice(("affine", "shear-x", "shear-y"))
        k = [rng.randint(-3, 3) for _ in range(6)]
        if kind == "affine":
            xt = f"{k[0]}*x + {k[1]}*y + {k[4]}"
            yt = f"{k[2]}*x + {k[3]}*y + {k[5]}"
        elif kind == "shear-x":
            xt = f"{k[0]}*x + {k[1]}*y^2 + {k[2]}*y"
            yt = f"{k[3]}*y + {k[4]}"
        else:
            xt = f"{k[0]}*x + {k[4]}"
            yt = f"{k[3]}*y + {k[1]}*x^2 + {k[2]}*x"
        try:
            return PointTransformation.of(xt, yt)
        except OdekitError:
            continue


__all__ = [
    "PointTransformation",
    "closed_form_inverse",
    "transform_pulled",
    "transform_ode",
    "pulled_back_context",
    "transform_pseudotensor",
    "sample_point",
    "weight_check",
    "check_phi_rule",
    "random_transformation",
    "WeightReport",
    "FIELDS",
    "MAX_RETRIES",
    "ONE",
]
