import importlib

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from odekit import _kernel_py as PY
from odekit import kernel as K
from odekit.rational import RatExpr

from _support import IDX, raw_polys, to_sympy

try:
    CY = importlib.import_module("odekit._kernel")
except ImportError:  # pragma: no cover - pure-Python install
    CY = None

BACKENDS = [PY] + ([CY] if CY is not None else [])
both = pytest.mark.parametrize("B", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])

PRIME = (1 << 61) - 1


def mono(*exps):
    return sum(e << (K.SHIFT * i) for i, e in zip(IDX, exps))


def sym(p):
    return to_sympy(RatExpr.from_poly(p)) if p else sp.Integer(0)


@both
@given(raw_polys(), raw_polys())
def test_mul_matches_sympy(B, a, b):
    assert sp.expand(sym(B.p_mul(a, b)) - sym(a) * sym(b)) == 0


@both
@given(raw_polys(), raw_polys(), raw_polys())
def test_ring_axioms(B, a, b, c):
    assert B.p_mul(a, b) == B.p_mul(b, a)
    assert B.p_mul(B.p_mul(a, b), c) == B.p_mul(a, B.p_mul(b, c))
    assert B.p_mul(a, B.p_add(b, c)) == B.p_add(B.p_mul(a, b), B.p_mul(a, c))
    assert B.p_sub(a, a) == {}
    assert B.p_add(a, B.p_neg(a)) == {}


@both
@given(raw_polys(), raw_polys())
def test_divexact_inverts_mul(B, a, b):
    if not b:
        return
    assert B.p_divexact(B.p_mul(a, b), b) == a


@both
def test_divexact_reports_non_divisible(B):
    a = {mono(1): 1, 0: 1}       # x + 1
    b = {mono(1): 1, 0: -1}      # x - 1
    assert B.p_divexact(a, b) is None
    with pytest.raises(ZeroDivisionError):
        B.p_divexact(a, {})


@both
@given(st.lists(st.integers(0, 200), min_size=5, max_size=5),
       st.lists(st.integers(0, 200), min_size=5, max_size=5))
def test_divides_is_componentwise(B, e1, e2):
    expect = all(a <= b for a, b in zip(e1, e2))
    assert B.divides(mono(*e1), mono(*e2)) == expect


@both
@given(st.lists(st.integers(0, 30000), min_size=5, max_size=5))
def test_decode_roundtrip(B, exps):
    m = mono(*exps)
    assert sum(e << (K.SHIFT * i) for i, e in B.decode(m)) == m
    assert all(e for _, e in B.decode(m))


@both
@given(raw_polys(), raw_polys())
def test_deriv_leibniz(B, a, b):
    i = IDX[0]
    lhs = B.p_deriv(B.p_mul(a, b), i)
    rhs = B.p_add(B.p_mul(B.p_deriv(a, i), b), B.p_mul(a, B.p_deriv(b, i)))
    assert lhs == rhs
    assert sp.expand(sym(B.p_deriv(a, i)) - sp.diff(sym(a), sp.Symbol("x"))) == 0


@both
@given(raw_polys(), raw_polys(), raw_polys(max_terms=3))
def test_derivation_leibniz(B, a, b, img):
    dmap = {IDX[1]: img, IDX[2]: {mono(1): 2}}
    lhs = B.p_derivation(B.p_mul(a, b), dmap)
    rhs = B.p_add(B.p_mul(B.p_derivation(a, dmap), b), B.p_mul(a, B.p_derivation(b, dmap)))
    assert lhs == rhs


@both
@given(raw_polys())
def test_shift_derivation_matches_derivation(B, a):
    # x -> 1, y -> P written both ways
    smap = {IDX[0]: -1, IDX[1]: IDX[2]}
    dmap = {IDX[0]: {0: 1}, IDX[1]: {mono(0, 0, 1): 1}}
    assert B.p_shift_derivation(a, smap) == B.p_derivation(a, dmap)


@both
@given(raw_polys(), st.lists(st.integers(1, 10**6), min_size=5, max_size=5))
def test_eval_mod_homomorphism(B, a, vals):
    full = [0] * (max(IDX) + 1)
    for i, v in zip(IDX, vals):
        full[i] = v
    b = {mono(1, 1): 3, 0: -2}
    lhs = B.p_eval_mod(B.p_mul(a, b), full, PRIME)
    assert lhs == B.p_eval_mod(a, full, PRIME) * B.p_eval_mod(b, full, PRIME) % PRIME


@both
@given(raw_polys(), st.lists(st.integers(1, 10**6), min_size=5, max_size=5))
def test_univariate_many_matches_single(B, a, vals):
    full = [0] * (max(IDX) + 1)
    for i, v in zip(IDX, vals):
        full[i] = v
    many = B.p_univariate_many_mod(a, full, IDX, PRIME)
    for i in IDX:
        assert many.get(i, []) == B.p_univariate_mod(a, full, i, PRIME)


@pytest.mark.skipif(CY is None, reason="compiled kernel not built")
@given(raw_polys(), raw_polys())
def test_backends_agree(a, b):
    full = [7, 11, 13, 17, 19] + [1] * 64
    assert CY.p_mul(a, b) == PY.p_mul(a, b)
    assert CY.p_add(a, b) == PY.p_add(a, b)
    assert CY.p_deriv(a, IDX[1]) == PY.p_deriv(a, IDX[1])
    assert CY.p_divexact(CY.p_mul(a, b), b) == PY.p_divexact(PY.p_mul(a, b), b) if b else True
    assert CY.p_eval_mod(a, full, PRIME) == PY.p_eval_mod(a, full, PRIME)
    assert CY.p_univariate_many_mod(a, full, IDX, PRIME) == \
        PY.p_univariate_many_mod(a, full, IDX, PRIME)


@pytest.mark.skipif(CY is None, reason="compiled kernel not built")
def test_large_exponent_guard_bits():
    # exponents near the field limit exercised the shift overflow once
    m1, m2 = mono(0, 0, 0, 0, 32000), mono(0, 0, 0, 0, 32001)
    for B in BACKENDS:
        assert B.divides(m1, m2) and not B.divides(m2, m1)
        assert B.guard(40) == PY.guard(40)


def test_backend_selection_env(monkeypatch):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import odekit; print(odekit.BACKEND)"],
        env={**__import__("os").environ, "ODEKIT_KERNEL": "python"},
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert K.BACKEND in ("python", "cython")


def test_results_identical_across_backends():
    import subprocess
    import sys

    code = ("from odekit import Invariants, ConcreteContext, format_expr;"
            "from odekit.examples import example;"
            "i = Invariants(ConcreteContext(example('E5')));"
            "print(format_expr(i.I3))")
    env = dict(__import__("os").environ)
    outs = set()
    for kern in ("python", "auto"):
        env["ODEKIT_KERNEL"] = kern
        outs.add(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                text=True, check=True).stdout)
    assert len(outs) == 1
