"""Point invariants of y'' = P + 3Q y' + 3R y'^2 + S y'^3.

Every field is written once against a differential context (generic jets,
concrete coefficients, or the special-coordinate ring), so the same code
serves identity checking, concrete evaluation and reduction.

Naming: ``OmegaArray`` is the symmetric array of the second scheme, ``Omega`` the
pseudoscalar.  ``Gamma0``/``Gamma1`` are ladder entries, ``connection``
returns the affine connection, ``frame`` the coefficients of the alpha,
gamma frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .contexts import Context
from .errors import (
    CaseViolationError,
    MaximalDegenerationError,
    SingularFrameError,
)
from .rational import ONE, ZERO, RatExpr
from .tensors import (
    D_LOWER,
    D_UPPER,
    PseudoTensor,
    covector,
    index_set,
    pair,
    raise_index,
    scalar,
    vector,
)


def _q(a, b=1):
    return RatExpr.from_fraction(Fraction(a, b))


# weights of the scalar quantities exposed by name
WEIGHTS = {
    "F5": 5, "J0": 5, "N": 2, "M": 4, "Omega": 1, "trR": 1, "detR": 2,
    "j0": 1, "j1": 4, "j4": 2, "j5": 2, "A": 1, "B": 1, "G": 3, "H": 3,
    "I1": 0, "I2": 0, "I3": 0, "I4": 0, "I5": 0, "I6": 0, "I7": 0, "I8": 0,
    "I9": 0, "I1Bgd": 0, "I2Bgd": 0,
}

# Alternative readings of three formulas; the first entry is the default.
VARIANTS = {
    # final factor of j0: (gamma11 - b gamma11) or (gamma11 - b gamma10), b = beta2/beta1
    "j0": ("gamma11", "gamma10"),
    # middle term of e1: 15/beta1^3 (...) or 15 delta10/beta1^3 (...)
    "e1": ("plain", "delta10"),
    # D2 = (mu2 beta2 - 3 mu2/beta1) d/dx + beta1 d/dy, or
    # D2 = (mu2 beta2 - 3 mu1/beta1) d/dx - mu2 beta1 d/dy with mu1 = j0
    "D2": ("mu2", "mu1"),
}

# the combination singled out by the coordinate-change tests
ARBITRATED = {"j0": "gamma10", "e1": "delta10", "D2": "mu1"}


def default_theta(P, Q, R, S):
    """theta[k][i][j], zero based, from the geodesic form of the equation."""
    t = [[[None] * 2 for _ in range(2)] for _ in range(2)]
    t[0][0][0] = Q
    t[0][0][1] = t[0][1][0] = R
    t[0][1][1] = S
    t[1][0][0] = -P
    t[1][0][1] = t[1][1][0] = -Q
    t[1][1][1] = -R
    return t


class StructureLadder:
    """alpha, beta, gamma, delta, epsilon and lambda expressions, lazily."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.P = ctx.jet("P")
        self.Q = ctx.jet("Q")
        self.R = ctx.jet("R")
        self.S = ctx.jet("S")

    def dx(self, e):
        return self.ctx.dx(e)

    def dy(self, e):
        return self.ctx.dy(e)

    @cached_property
    def alpha0(self):
        c = self.ctx
        return c.jet("Q", 1, 0) - c.jet("P", 0, 1) + 2 * self.P * self.R - 2 * self.Q**2

    @cached_property
    def alpha1(self):
        c = self.ctx
        return c.jet("R", 1, 0) - c.jet("Q", 0, 1) + self.P * self.S - self.Q * self.R

    @cached_property
    def alpha2(self):
        c = self.ctx
        return c.jet("S", 1, 0) - c.jet("R", 0, 1) + 2 * self.Q * self.S - 2 * self.R**2

    @property
    def OmegaArray(self):
        a0, a1, a2 = self.alpha0, self.alpha1, self.alpha2
        return ((a0, a1), (a1, a2))

    @cached_property
    def beta1(self):
        P, Q, R = self.P, self.Q, self.R
        return (self.dx(self.alpha1) - self.dy(self.alpha0) + R * self.alpha0
                - 2 * Q * self.alpha1 + P * self.alpha2)

    @cached_property
    def beta2(self):
        Q, R, S = self.Q, self.R, self.S
        return (self.dx(self.alpha2) - self.dy(self.alpha1) + S * self.alpha0
                - 2 * R * self.alpha1 + Q * self.alpha2)

    @cached_property
    def gamma10(self):
        return self.dx(self.beta1) - self.Q * self.beta1 + self.P * self.beta2

    @cached_property
    def gamma11(self):
        return self.dx(self.beta2) - self.R * self.beta1 + self.Q * self.beta2

    @cached_property
    def gamma20(self):
        return self.dy(self.beta1) - self.R * self.beta1 + self.Q * self.beta2

    @cached_property
    def gamma21(self):
        return self.dy(self.beta2) - self.S * self.beta1 + self.R * self.beta2

    @cached_property
    def Gamma0(self):
        return 3 * self.beta2 * self.gamma10 + self.beta1 * (self.gamma20 - 4 * self.gamma11)

    @cached_property
    def Gamma1(self):
        return self.beta2 * (4 * self.gamma20 - self.gamma11) - 3 * self.beta1 * self.gamma21

    @cached_property
    def delta10(self):
        return (self.dx(self.gamma10) - 2 * self.Q * self.gamma10
                + self.P * (self.gamma20 + self.gamma11) - 5 * self.alpha0 * self.beta1)

    @cached_property
    def delta20(self):
        return (self.dx(self.gamma20) - self.R * self.gamma10 + self.P * self.gamma21
                - 4 * self.alpha1 * self.beta1 - self.alpha0 * self.beta2)

    @cached_property
    def delta30(self):
        return (self.dy(self.gamma20) - self.S * self.gamma10 + self.Q * self.gamma21
                - 4 * self.alpha2 * self.beta1 - self.alpha1 * self.beta2)

    @cached_property
    def delta11(self):
        return (self.dx(self.gamma11) - self.R * self.gamma10 + self.P * self.gamma21
                - self.alpha1 * self.beta1 - 4 * self.alpha0 * self.beta2)

    @cached_property
    def delta21(self):
        return (self.dx(self.gamma21) - self.R * (self.gamma20 + self.gamma11)
                + 2 * self.Q * self.gamma21 - 5 * self.alpha1 * self.beta2)

    @cached_property
    def delta31(self):
        return (self.dy(self.gamma21) - self.S * (self.gamma20 + self.gamma11)
                + 2 * self.R * self.gamma21 - 5 * self.alpha2 * self.beta2)

    @cached_property
    def eps10(self):
        return (self.dx(self.delta10) - 3 * self.Q * self.delta10
                + self.P * (2 * self.delta20 + self.delta11) - 12 * self.alpha0 * self.gamma10)

    @cached_property
    def eps20(self):
        return (self.dy(self.delta10) - 3 * self.R * self.delta10
                + self.Q * (2 * self.delta20 + self.delta11) - 12 * self.alpha1 * self.gamma10)

    @cached_property
    def eps11(self):
        return (self.dx(self.delta11) - self.R * self.delta10 - self.Q * self.delta11
                + 2 * self.P * self.delta21 - 2 * self.alpha1 * self.gamma10
                - 10 * self.alpha0 * self.gamma11 - 10 * self.beta1**2)

    @cached_property
    def lambda10(self):
        return (self.dx(self.eps10) - 4 * self.Q * self.eps10
                + self.P * (3 * self.eps20 + self.eps11) - 21 * self.alpha0 * self.delta10)

    FIELDS = (
        "alpha0", "alpha1", "alpha2", "beta1", "beta2",
        "gamma10", "gamma11", "gamma20", "gamma21", "Gamma0", "Gamma1",
        "delta10", "delta20", "delta30", "delta11", "delta21", "delta31",
        "eps10", "eps20", "eps11", "lambda10",
    )

    def as_dict(self, names=None):
        return {n: getattr(self, n) for n in (names or self.FIELDS)}


@dataclass(frozen=True)
class FrameCoefficients:
    """Coefficients of nabla_b c = G^1_bc alpha + G^2_bc gamma.

    Keys are strings "abc" with a the component (1 alpha, 2 gamma), b the
    direction and c the differentiated field, so "212" is G^2_12.
    """

    coeffs: dict

    def __getitem__(self, key):
        return self.coeffs[key]

    @staticmethod
    def weight(key):
        w = {"1": 2, "2": 3}
        a, b, c = key
        return w[b] + w[c] - w[a]

    KEYS = ("111", "211", "112", "212", "121", "221", "122", "222")


def f_matrix(fr, M, trR, nab_a, nab_g):
    """Matrix F of the curvature operator in the (alpha, gamma) frame.

    ``fr`` maps frame keys to values, ``nab_a``/``nab_g`` apply the
    covariant derivative along alpha/gamma to a scalar of given weight.
    Returns ((F11, F12), (F21, F22)) with upper index first.
    """
    W = FrameCoefficients.weight

    def da(k):
        return nab_a(fr[k], W(k))

    def dg(k):
        return nab_g(fr[k], W(k))

    c1 = fr["112"] - fr["121"]
    c2 = fr["212"] - fr["221"]
    # R(alpha), k = 2
    a_ga = (da("121") + fr["121"] * fr["111"] + fr["221"] * fr["112"],
            fr["121"] * fr["211"] + da("221") + fr["221"] * fr["212"])
    g_aa = (dg("111") + fr["111"] * fr["121"] + fr["211"] * fr["122"],
            fr["111"] * fr["221"] + dg("211") + fr["211"] * fr["222"])
    F11 = (a_ga[0] - g_aa[0] - c1 * fr["111"] - c2 * fr["121"]) / M + 2 * trR
    F21 = (a_ga[1] - g_aa[1] - c1 * fr["211"] - c2 * fr["221"]) / M
    # R(gamma), k = 3
    a_gg = (da("122") + fr["122"] * fr["111"] + fr["222"] * fr["112"],
            fr["122"] * fr["211"] + da("222") + fr["222"] * fr["212"])
    g_ag = (dg("112") + fr["112"] * fr["121"] + fr["212"] * fr["122"],
            fr["112"] * fr["221"] + dg("212") + fr["212"] * fr["222"])
    F12 = (a_gg[0] - g_ag[0] - c1 * fr["112"] - c2 * fr["122"]) / M
    F22 = (a_gg[1] - g_ag[1] - c1 * fr["212"] - c2 * fr["222"]) / M + 3 * trR
    return ((F11, F12), (F21, F22))


class Invariants:
    """All fields of one equation in a given context.

    ``branch`` is "auto", "A" (formulas divided by A) or "B".  ``theta``
    overrides the default symmetric array; it is either a nested list
    theta[k][i][j] (zero based) or a callable (P, Q, R, S) -> such a list.
    ``variants`` selects readings listed in ``VARIANTS``.
    """

    def __init__(self, ctx: Context, branch="auto", theta=None, variants=None,
                 base_point=None):
        if branch not in ("auto", "A", "B"):
            raise ValueError("branch must be auto, A or B")
        self.ctx = ctx
        self.requested_branch = branch
        self.base_point = base_point
        self._theta = theta
        self.variants = {k: v[0] for k, v in VARIANTS.items()}
        for k, v in (variants or {}).items():
            if k not in VARIANTS or v not in VARIANTS[k]:
                raise ValueError(f"unknown variant {k}={v}")
            self.variants[k] = v
        self.ladder = StructureLadder(ctx)
        self.P, self.Q, self.R, self.S = (ctx.jet(L) for L in "PQRS")

    # -- helpers ----------------------------------------------------------

    def dx(self, e):
        return self.ctx.dx(e)

    def dy(self, e):
        return self.ctx.dy(e)

    def d(self, e, k):
        return self.ctx.dx(e) if k == 1 else self.ctx.dy(e)

    def jet(self, L, p=0, q=0):
        return self.ctx.jet(L, p, q)

    def _nonzero(self, e, condition, detail=""):
        if e.is_zero():
            raise CaseViolationError(condition, detail)
        return e

    # -- first structures -------------------------------------------------

    @cached_property
    def A(self):
        j = self.jet
        P, Q, R, S = self.P, self.Q, self.R, self.S
        return (j("P", 0, 2) - 2 * j("Q", 1, 1) + j("R", 2, 0) + 2 * P * j("S", 1, 0)
                + S * j("P", 1, 0) - 3 * P * j("R", 0, 1) - 3 * R * j("P", 0, 1)
                - 3 * Q * j("R", 1, 0) + 6 * Q * j("Q", 0, 1))

    @cached_property
    def B(self):
        j = self.jet
        P, Q, R, S = self.P, self.Q, self.R, self.S
        return (j("S", 2, 0) - 2 * j("R", 1, 1) + j("Q", 0, 2) - 2 * S * j("P", 0, 1)
                - P * j("S", 0, 1) + 3 * S * j("Q", 1, 0) + 3 * Q * j("S", 1, 0)
                + 3 * R * j("Q", 0, 1) - 6 * R * j("R", 1, 0))

    @cached_property
    def A10(self):
        return self.dx(self.A)

    @cached_property
    def A01(self):
        return self.dy(self.A)

    @cached_property
    def B10(self):
        return self.dx(self.B)

    @cached_property
    def B01(self):
        return self.dy(self.B)

    @cached_property
    def G(self):
        A, B, P, Q, R, S = self.A, self.B, self.P, self.Q, self.R, self.S
        return (-B * self.B10 - 3 * A * self.B01 + 4 * B * self.A01 + 3 * S * A**2
                - 6 * R * B * A + 3 * Q * B**2)

    @cached_property
    def H(self):
        A, B, P, Q, R = self.A, self.B, self.P, self.Q, self.R
        return (-A * self.A01 - 3 * B * self.A10 + 4 * A * self.B10 - 3 * P * B**2
                + 6 * Q * A * B - 3 * R * A**2)

    @cached_property
    def F5(self):
        A, B, P, Q, R, S = self.A, self.B, self.P, self.Q, self.R, self.S
        return (A * B * self.A01 + B * A * self.B10 - A**2 * self.B01 - B**2 * self.A10
                - P * B**3 + 3 * Q * A * B**2 - 3 * R * A**2 * B + S * A**3)

    @cached_property
    def F5_from_fields(self):
        """(A G + B H) / 3."""
        return (self.A * self.G + self.B * self.H) / 3

    @cached_property
    def J0(self):
        L = self.ladder
        b1, b2 = L.beta1, L.beta2
        return b2**2 * L.gamma10 - b1 * b2 * (L.gamma20 + L.gamma11) + b1**2 * L.gamma21

    @property
    def mu1_tag(self):
        """mu1 as a formal fifth root over J0."""
        return f"({self.J0})^(1/5)"

    def alpha_covector(self):
        return covector(self.A, self.B, 1, "alpha")

    def alpha_vector(self):
        return raise_index(self.alpha_covector(), "alpha")

    def beta_covector(self):
        return covector(-self.H, self.G, 3, "beta")

    def beta_vector(self):
        return raise_index(self.beta_covector(), "beta")

    # -- branch -------------------------------------------------------------

    @cached_property
    def branch(self):
        """The branch actually used ("A" or "B")."""
        a_ok = not self.A.is_zero()
        b_ok = not self.B.is_zero()
        if not a_ok and not b_ok:
            raise MaximalDegenerationError()
        want = self.requested_branch
        if want == "A":
            if not a_ok:
                raise CaseViolationError("A != 0", "branch A requested but A = 0")
            return "A"
        if want == "B":
            if not b_ok:
                raise CaseViolationError("B != 0", "branch B requested but B = 0")
            return "B"
        if a_ok and b_ok and self.base_point is not None:
            try:
                if self.A.evaluate(self.base_point) == 0:
                    return "B"
            except Exception:
                return "B"
        return "A" if a_ok else "B"

    # -- intermediate degeneration fields -------------------------------------

    @cached_property
    def N(self):
        if self.branch == "B":
            return self.G / (3 * self.B)
        return -self.H / (3 * self.A)

    @cached_property
    def N10(self):
        return self.dx(self.N)

    @cached_property
    def N01(self):
        return self.dy(self.N)

    @cached_property
    def phi(self):
        A, B, P, Q, R, S = self.A, self.B, self.P, self.Q, self.R, self.S
        if self.branch == "B":
            u = (A * S - self.B01) / (5 * B)
            phi1 = -3 * A * u / B - 3 * (self.A01 + self.B10 - 3 * A * R) / (5 * B) - _q(6, 5) * Q
            phi2 = 3 * u - _q(3, 5) * R
        else:
            v = (B * P + self.A10) / (5 * A)
            phi1 = -3 * v + _q(3, 5) * Q
            phi2 = 3 * B * v / A - 3 * (self.B10 + self.A01 + 3 * B * Q) / (5 * A) + _q(6, 5) * R
        return (phi1, phi2)

    @cached_property
    def theta(self):
        t = self._theta
        if t is None:
            return default_theta(self.P, self.Q, self.R, self.S)
        if callable(t):
            return t(self.P, self.Q, self.R, self.S)
        return t

    @cached_property
    def connection(self):
        """Gamma[k][i][j], zero based."""
        th, ph = self.theta, self.phi
        G = [[[None] * 2 for _ in range(2)] for _ in range(2)]
        for k in range(2):
            for i in range(2):
                for j in range(2):
                    corr = ZERO
                    if k == j:
                        corr = corr + ph[i]
                    if k == i:
                        corr = corr + ph[j]
                    G[k][i][j] = th[k][i][j] - corr / 3
        return G

    @cached_property
    def M(self):
        A, B, N, P, Q, R, S = self.A, self.B, self.N, self.P, self.Q, self.R, self.S
        if self.branch == "B":
            return (-12 * A * N * (A * S - self.B01) / (5 * B) - A * self.N01
                    + _q(24, 5) * A * N * R - _q(6, 5) * N * self.A01
                    - _q(6, 5) * N * self.B10 + B * self.N10 - _q(12, 5) * B * N * Q)
        return (-12 * B * N * (B * P + self.A10) / (5 * A) + B * self.N10
                + _q(24, 5) * B * N * Q + _q(6, 5) * N * self.B10
                + _q(6, 5) * N * self.A01 - A * self.N01 - _q(12, 5) * A * N * R)

    @cached_property
    def Omega(self):
        A, B, P, Q, R, S = self.A, self.B, self.P, self.Q, self.R, self.S
        j = self.jet
        if self.branch == "B":
            B01, A01, B10, A10 = self.B01, self.A01, self.B10, self.A10
            return (2 * A * B01 * (A * S - B01) / B**3
                    + (2 * A01 - 3 * A * R) * B01 / B**2
                    + (B10 - 2 * A01) * A * S / B**2
                    + (A * self.dy(B01) - A**2 * j("S", 0, 1)) / B**2
                    - self.dy(A01) / B
                    + (3 * A01 * R + 3 * A * j("R", 0, 1) - A10 * S - A * j("S", 1, 0)) / B
                    + j("R", 1, 0) - 2 * j("Q", 0, 1))
        B01, A01, B10, A10 = self.B01, self.A01, self.B10, self.A10
        return (2 * B * A10 * (B * P + A10) / A**3
                - (2 * B10 + 3 * B * Q) * A10 / A**2
                + (A01 - 2 * B10) * B * P / A**2
                - (B * self.dx(A10) + B**2 * j("P", 1, 0)) / A**2
                + self.dx(B10) / A
                + (3 * B10 * Q + 3 * B * j("Q", 1, 0) - B01 * P - B * j("P", 0, 1)) / A
                + j("Q", 0, 1) - 2 * j("R", 1, 0))

    @cached_property
    def omega12(self):
        """omega_12 = d phi_1/dy - d phi_2/dx."""
        p1, p2 = self.phi
        return self.dy(p1) - self.dx(p2)

    def omega_form(self):
        w = self.omega12
        return PseudoTensor(0, 2, 0, {(1, 1): ZERO, (1, 2): w, (2, 1): -w, (2, 2): ZERO}, "omega")

    @cached_property
    def Omega_from_phi(self):
        """(5/6) omega_ij d^ij."""
        return _q(5, 3) * self.omega12

    @cached_property
    def gamma_cov(self):
        A, B, N, P, Q, R, S, Om = self.A, self.B, self.N, self.P, self.Q, self.R, self.S, self.Omega
        if self.branch == "B":
            u = A * S - self.B01
            g1 = (6 * A * N * u / (5 * B**2) - 18 * N * A * R / (5 * B)
                  + 6 * N * (self.A01 + self.B10) / (5 * B) - self.N10
                  + _q(12, 5) * N * Q - 2 * Om * A)
            g2 = -6 * N * u / (5 * B) - self.N01 + _q(6, 5) * N * R - 2 * Om * B
        else:
            v = B * P + self.A10
            g1 = 6 * N * v / (5 * A) - self.N10 - _q(6, 5) * N * Q - 2 * Om * A
            g2 = (-6 * B * N * v / (5 * A**2) + 18 * N * B * Q / (5 * A)
                  + 6 * N * (self.B10 + self.A01) / (5 * A) - self.N01
                  - _q(12, 5) * N * R - 2 * Om * B)
        return (g1, g2)

    def gamma_covector(self):
        return covector(*self.gamma_cov, 2, "gamma")

    def gamma_vector(self):
        return raise_index(self.gamma_covector(), "gamma")

    @cached_property
    def M_from_frame(self):
        """sum_ij alpha_i d^ij gamma_j."""
        g1, g2 = self.gamma_cov
        return self.A * g2 - self.B * g1

    # -- curvature ------------------------------------------------------------

    @cached_property
    def curvature(self):
        """R[k][r][i][j] (zero based)."""
        G = self.connection
        Rt = [[[[ZERO] * 2 for _ in range(2)] for _ in range(2)] for _ in range(2)]
        for k in range(2):
            for r in range(2):
                # only i < j needs computing; the rest follows by antisymmetry
                i, j = 0, 1
                v = self.d(G[k][j][r], i + 1) - self.d(G[k][i][r], j + 1)
                for q in range(2):
                    v = v + G[k][i][q] * G[q][j][r] - G[k][j][q] * G[q][i][r]
                Rt[k][r][0][1] = v
                Rt[k][r][1][0] = -v
        return Rt

    def curvature_entry(self, k, r, i, j):
        """R^k_rij straight from the defining formula (1-based indices)."""
        G = self.connection
        k, r, i, j = k - 1, r - 1, i - 1, j - 1
        v = self.d(G[k][j][r], i + 1) - self.d(G[k][i][r], j + 1)
        for q in range(2):
            v = v + G[k][i][q] * G[q][j][r] - G[k][j][q] * G[q][i][r]
        return v

    @cached_property
    def ricci_trace12(self):
        """sum_k R^k_k12."""
        Rt = self.curvature
        return Rt[0][0][0][1] + Rt[1][1][0][1]

    @cached_property
    def Rmat(self):
        """R^k_q = (1/2) R^k_qij d^ij = R^k_q12, as [[R11, R12], [R21, R22]]."""
        Rt = self.curvature
        return [[Rt[k][q][0][1] for q in range(2)] for k in range(2)]

    @cached_property
    def trR(self):
        m = self.Rmat
        return m[0][0] + m[1][1]

    @cached_property
    def detR(self):
        m = self.Rmat
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]

    def curvature_operator(self):
        return PseudoTensor(1, 1, 1, {(k, q): self.Rmat[k - 1][q - 1]
                                      for k in (1, 2) for q in (1, 2)}, "R")

    # -- covariant derivatives --------------------------------------------------

    def nabla(self, t: PseudoTensor, k: int) -> PseudoTensor:
        """Component k (1 or 2) of the covariant derivative of t."""
        G = self.connection
        ph = self.phi[k - 1]
        kk = k - 1
        out = {}
        for idx, val in t.components.items():
            v = self.d(val, k)
            up, low = idx[: t.r], idx[t.r:]
            for n in range(t.r):
                for w in (1, 2):
                    rep = idx[:n] + (w,) + idx[n + 1:]
                    c = G[up[n] - 1][kk][w - 1]
                    if not c.is_zero():
                        v = v + c * t.components[rep]
            for n in range(t.s):
                for w in (1, 2):
                    rep = idx[: t.r + n] + (w,) + idx[t.r + n + 1:]
                    c = G[w - 1][kk][low[n] - 1]
                    if not c.is_zero():
                        v = v - c * t.components[rep]
            if t.weight and not ph.is_zero():
                v = v + t.weight * ph * val
            out[idx] = v
        return PseudoTensor(t.r, t.s, t.weight, out, t.name)

    def nabla_along(self, t: PseudoTensor, vec: PseudoTensor) -> PseudoTensor:
        d1, d2 = self.nabla(t, 1), self.nabla(t, 2)
        comps = {i: vec[1] * d1.components[i] + vec[2] * d2.components[i] for i in t.components}
        return PseudoTensor(t.r, t.s, t.weight + vec.weight, comps, t.name)

    def nabla_scalar(self, e: RatExpr, weight: int, vec: PseudoTensor) -> RatExpr:
        """Covariant derivative of a pseudoscalar of the given weight along vec."""
        p1, p2 = self.phi
        v = vec[1] * (self.dx(e) + weight * p1 * e) + vec[2] * (self.dy(e) + weight * p2 * e)
        return v

    def nabla_alpha(self, e, weight):
        return self.nabla_scalar(e, weight, self.alpha_vector())

    def nabla_gamma(self, e, weight):
        return self.nabla_scalar(e, weight, self.gamma_vector())

    def grad_omega(self):
        """Covector (nabla_1 Omega, nabla_2 Omega)."""
        s = scalar(self.Omega, 1)
        return covector(self.nabla(s, 1)[()], self.nabla(s, 2)[()], 1, "grad Omega")

    def nabla_d(self):
        """All components of nabla_k d for both d-tensors."""
        out = []
        for dt in (D_LOWER, D_UPPER):
            for k in (1, 2):
                out.extend(self.nabla(dt, k).values())
        return out

    # -- commutator and frame -----------------------------------------------------

    def commutator(self):
        """[alpha, gamma] for pseudovectors of weights 2 and 3."""
        a, g = self.alpha_vector(), self.gamma_vector()
        ph = self.phi
        m, n = a.weight, g.weight
        comps = {}
        for i in (1, 2):
            v = ZERO
            for s in (1, 2):
                v = (v + a[s] * self.d(g[i], s) - g[s] * self.d(a[i], s)
                     + n * a[s] * ph[s - 1] * g[i] - m * g[s] * ph[s - 1] * a[i])
            comps[(i,)] = v
        return PseudoTensor(1, 0, m + n, comps, "[alpha,gamma]")

    def torsion_free_commutator(self):
        """nabla_alpha gamma - nabla_gamma alpha."""
        a, g = self.alpha_vector(), self.gamma_vector()
        x = self.nabla_along(g, a)
        y = self.nabla_along(a, g)
        return PseudoTensor(1, 0, x.weight, {i: x.components[i] - y.components[i]
                                             for i in x.components}, "")

    @cached_property
    def frame(self) -> FrameCoefficients:
        M = self.M_from_frame
        if M.is_zero():
            raise SingularFrameError()
        a, g = self.alpha_vector(), self.gamma_vector()

        def split(V):
            # V = c1 alpha + c2 gamma, with d(alpha, gamma) = M
            return pair(V, g) / M, pair(a, V) / M

        fr = {}
        for b, X in (("1", a), ("2", g)):
            for c, Y in (("1", a), ("2", g)):
                c1, c2 = split(self.nabla_along(Y, X))
                fr["1" + b + c] = c1
                fr["2" + b + c] = c2
        return FrameCoefficients(fr)

    @cached_property
    def F_matrix(self):
        return f_matrix(self.frame.coeffs, self.M_from_frame, self.trR,
                        self.nabla_alpha, self.nabla_gamma)

    @cached_property
    def detF(self):
        (a, b), (c, d) = self.F_matrix
        return a * d - b * c

    def curvature_on(self, X: PseudoTensor) -> PseudoTensor:
        """Vector R^s_q X^q."""
        m = self.Rmat
        return vector(m[0][0] * X[1] + m[0][1] * X[2], m[1][0] * X[1] + m[1][1] * X[2],
                      X.weight + 1, "R(X)")

    def curvature_operator_on(self, X: PseudoTensor):
        """R(alpha, gamma) X = sum R^s_qij alpha^i gamma^j X^q, from the full tensor."""
        Rt = self.curvature
        a, g = self.alpha_vector(), self.gamma_vector()
        out = []
        for s in range(2):
            v = ZERO
            for q in range(2):
                for i in range(2):
                    for j in range(2):
                        if i != j:
                            v = v + Rt[s][q][i][j] * a[i + 1] * g[j + 1] * X[q + 1]
            out.append(v)
        return tuple(out)

    def omega_on_frame(self):
        """omega(alpha, gamma) = omega_ij alpha^i gamma^j."""
        return self.omega12 * self.M_from_frame

    # -- j quantities and operators -------------------------------------------------

    def _beta1(self):
        b1 = self.ladder.beta1
        if b1.is_zero():
            raise CaseViolationError("beta1 != 0", "the j quantities divide by beta1")
        return b1

    @cached_property
    def j0(self):
        L = self.ladder
        b1 = self._beta1()
        r = L.beta2 / b1
        last = L.gamma11 if self.variants["j0"] == "gamma11" else L.gamma10
        return 3 / b1 * (r * L.delta10 - L.delta11) + 6 * L.gamma10 / b1**2 * (L.gamma11 - r * last)

    @cached_property
    def j1(self):
        L = self.ladder
        b1 = self._beta1()
        b2 = L.beta2
        r = b2 / b1
        return (_q(5, 6) * (2 * b2 * L.delta20 - b1 * L.delta30 - b2**2 * L.delta10 / b1)
                + (L.gamma20 - _q(2, 3) * L.gamma11 - r * L.gamma10 / 3)
                * (L.gamma20 + L.gamma11 - 2 * r * L.gamma10))

    @cached_property
    def j2(self):
        L = self.ladder
        b1 = self._beta1()
        r = L.beta2 / b1
        return ((L.delta20 - r * L.delta10) / b1
                + L.gamma10 / (5 * b1**2) * (7 * r * L.gamma10 - 6 * L.gamma20 - L.gamma11))

    @cached_property
    def j3(self):
        L = self.ladder
        b1 = self._beta1()
        return _q(3, 5) * (L.delta10 / b1**3 - 6 * L.gamma10**2 / (5 * b1**4))

    @cached_property
    def j4(self):
        return self.ladder.Gamma0 / self._beta1()

    @cached_property
    def j5(self):
        return 5 * (2 * self.j1 * self.j3 + (self.j2 - self.j0 / 6) ** 2)

    @cached_property
    def e1(self):
        L = self.ladder
        b1 = self._beta1()
        r = L.beta2 / b1
        mid = 15 / b1**3 * (L.gamma11 - r * L.gamma10)
        if self.variants["e1"] == "delta10":
            mid = mid * L.delta10
        return 5 / b1**2 * (r * L.eps10 - L.eps11) + mid - 6 * L.gamma10 / b1**2 * self.j0

    @cached_property
    def mu2(self):
        L = self.ladder
        g0 = L.Gamma0
        if g0.is_zero():
            raise CaseViolationError("Gamma0 != 0", "mu2 divides by Gamma0")
        return 3 * self._beta1() * self.e1 / g0

    def D1_coeffs(self):
        """Coefficients of nabla_1, nabla_2 in D1 = nabla_alpha / (3 Omega)^2."""
        Om = self.Omega
        if Om.is_zero():
            raise CaseViolationError("Omega != 0", "D1 divides by Omega")
        a = self.alpha_vector()
        s = (3 * Om) ** 2
        return (a[1] / s, a[2] / s)

    def D1_bgd_coeffs(self):
        """Frame form: beta2/mu1^2 d/dx - beta1/mu1^2 d/dy with mu1 = j0."""
        L = self.ladder
        mu1 = self.j0
        if mu1.is_zero():
            raise CaseViolationError("j0 != 0", "D1 divides by j0")
        return (L.beta2 / mu1**2, -L.beta1 / mu1**2)

    def D2_coeffs(self):
        """Coefficients of nabla_1, nabla_2 in the second operator D2."""
        L = self.ladder
        b1, b2 = self._beta1(), L.beta2
        mu2 = self.mu2
        if self.variants["D2"] == "mu2":
            return (mu2 * b2 - 3 * mu2 / b1, b1)
        return (mu2 * b2 - 3 * self.j0 / b1, -mu2 * b1)

    def D2_tensorial(self):
        """The operator written through alpha and the raised gradient of Omega."""
        N = self.N
        if N.is_zero():
            raise CaseViolationError("N != 0", "D2 divides by N")
        a = self.alpha_vector()
        gO = raise_index(self.grad_omega())
        return ((50 * a[1] - 5 * gO[1]) / N, (50 * a[2] - 5 * gO[2]) / N)

    def D2_frame(self):
        """The operator through nabla_alpha and nabla_gamma."""
        N, M = self.N, self.M_from_frame
        if M.is_zero():
            raise SingularFrameError()
        if N.is_zero():
            raise CaseViolationError("N != 0", "D2 divides by N")
        a, g = self.alpha_vector(), self.gamma_vector()
        gO = self.grad_omega()
        ngO = gO[1] * g[1] + gO[2] * g[2]
        naO = gO[1] * a[1] + gO[2] * a[2]
        ca = 50 / N - 5 * ngO / (M * N)
        cg = 5 * naO / (M * N)
        return (ca * a[1] + cg * g[1], ca * a[2] + cg * g[2])

    def grad_omega_in_frame(self):
        """Vector (nabla_gamma Omega / M) alpha - (nabla_alpha Omega / M) gamma."""
        M = self.M_from_frame
        a, g = self.alpha_vector(), self.gamma_vector()
        gO = self.grad_omega()
        ngO = gO[1] * g[1] + gO[2] * g[2]
        naO = gO[1] * a[1] + gO[2] * a[2]
        return (ngO / M * a[1] - naO / M * g[1], ngO / M * a[2] - naO / M * g[2])

    # -- scalar invariants ------------------------------------------------------------

    def _need_N(self):
        if self.N.is_zero():
            raise CaseViolationError("N != 0", "the invariants divide by N")
        return self.N

    @cached_property
    def I1(self):
        return self.M / self._need_N() ** 2

    @cached_property
    def I2(self):
        return self.Omega**2 / self._need_N()

    @cached_property
    def I3(self):
        M = self.M
        if M.is_zero():
            raise SingularFrameError()
        return self.frame["122"] * self.N**2 / M**2

    @cached_property
    def I3_dropped_exponent(self):
        """The older form with M to the first power."""
        return self.frame["122"] * self.N**2 / self.M

    def _ia(self, e):
        return self.nabla_alpha(e, 0) / self._need_N()

    def _ig(self, e):
        return self.nabla_gamma(e, 0) ** 2 / self._need_N() ** 3

    @cached_property
    def I4(self):
        return self._ia(self.I1)

    @cached_property
    def I5(self):
        return self._ia(self.I2)

    @cached_property
    def I6(self):
        return self._ia(self.I3)

    @cached_property
    def I7(self):
        return self._ig(self.I1)

    @cached_property
    def I8(self):
        return self._ig(self.I2)

    @cached_property
    def I9(self):
        return self._ig(self.I3)

    @cached_property
    def I1Bgd(self):
        j0 = self.j0
        if j0.is_zero():
            raise CaseViolationError("j0 != 0", "I1Bgd divides by j0")
        return self.ladder.Gamma0 / (self._beta1() * j0**2)

    @cached_property
    def I2Bgd(self):
        j0 = self.j0
        if j0.is_zero():
            raise CaseViolationError("j0 != 0", "I2Bgd divides by j0")
        return 5 / j0**2 * (2 * self.j1 * self.j3 + (self.j2 - j0 / 6) ** 2)

    # -- the second degeneration case ---------------------------------------------------

    def lambda_relation(self, Lam):
        """det R + (9/25) Lambda (Omega + Lambda); vanishes for the Lambda of
        the second intermediate case."""
        return self.detR + _q(9, 25) * Lam * (self.Omega + Lam)

    # -- name lookup ---------------------------------------------------------------------

    def value(self, name):
        """Scalar quantity by name, as (expression, weight or None)."""
        if name in StructureLadder.FIELDS:
            return getattr(self.ladder, name), None
        if name in ("phi1", "phi2"):
            return self.phi[int(name[-1]) - 1], None
        if name in ("gamma1", "gamma2"):
            return self.gamma_cov[int(name[-1]) - 1], 2
        if name == "Omega_phi":
            return self.Omega_from_phi, 1
        if name in ("j2", "j3", "e1", "mu2"):
            return getattr(self, name), None
        if name in WEIGHTS:
            return getattr(self, name), WEIGHTS[name]
        if name.startswith("frame") and name[5:] in FrameCoefficients.KEYS:
            return self.frame[name[5:]], FrameCoefficients.weight(name[5:])
        raise KeyError(name)


NAMES = sorted(
    set(WEIGHTS) | set(StructureLadder.FIELDS)
    | {"phi1", "phi2", "gamma1", "gamma2", "Omega_phi", "j2", "j3", "e1", "mu2"}
    | {"frame" + k for k in FrameCoefficients.KEYS}
)


__all__ = [
    "Invariants",
    "StructureLadder",
    "FrameCoefficients",
    "f_matrix",
    "default_theta",
    "WEIGHTS",
    "VARIANTS",
    "ARBITRATED",
    "NAMES",
    "index_set",
    "ONE",
]
