import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odekit import ConcreteContext, Invariants, ReductionSystem, normal_form, parse
from odekit.examples import example
from odekit.jets import JetVariable, instantiate
from odekit.special import eliminated_jets, is_free, special_context

from _support import jet_exprs

# a mix of free and eliminated jets, order at most 4
MIXED = ("P", "Q", "R", "S", "P[0,2]", "Q[0,2]", "S[1,0]", "P[1,2]", "Q[0,3]", "S[1,2]",
         "R[2,1]", "P[0,1]")

RS = ReductionSystem()


def test_documented_reduction():
    got = normal_form("S[1,2] + Q[0,2]")
    assert got == parse("2*R[1,1] - 3*R*Q[0,1] + 6*R*R[1,0]")


def test_free_generators():
    assert is_free("P", 3, 1) and is_free("R", 0, 5)
    assert not is_free("S", 0, 0) and not is_free("Q", 0, 2)
    with pytest.raises(KeyError):
        RS.rule("R", 1, 1)


@given(jet_exprs(names=MIXED))
def test_normal_form_idempotent(e):
    nf = normal_form(e)
    assert not eliminated_jets(nf)
    assert normal_form(nf) == nf


@given(jet_exprs(names=MIXED), st.integers(0, 10**6))
def test_reduction_order_independent(e, seed):
    by_rank = RS.reduce(e)
    shuffled = RS.reduce(e, strategy="random", rng=random.Random(seed))
    assert by_rank == shuffled == normal_form(e)


SPECIAL_ODE = example("special")
SPECIAL_CTX = ConcreteContext(SPECIAL_ODE)


def _concrete_point(nf, x, y):
    at = {"x": x, "y": y}
    pt = dict(at)
    for n in nf.variables() - {"x", "y"}:
        v = JetVariable.from_name(n)
        pt[n] = SPECIAL_CTX.jet(v.letter, v.p, v.q).evaluate(at)
    return pt


@settings(max_examples=50)
@given(jet_exprs(names=MIXED),
       st.fractions(-4, 4, max_denominator=5), st.fractions(-4, 4, max_denominator=5))
def test_reduction_is_sound_on_a_special_instance(e, x, y):
    # the instance satisfies A = 1, B = 0, so every reduction must be invisible there
    nf = normal_form(e)
    try:
        direct = instantiate(e, SPECIAL_ODE, SPECIAL_CTX).evaluate({"x": x, "y": y})
        reduced = nf.evaluate(_concrete_point(nf, x, y))
    except ZeroDivisionError:
        return
    assert direct == reduced


def test_special_instance_is_in_special_coordinates():
    i = Invariants(SPECIAL_CTX)
    assert i.A == parse("1") and i.B.is_zero()


def test_special_context_agrees_with_rewriting():
    ctx = special_context()
    for letter, p, q in (("P", 0, 2), ("Q", 1, 2), ("P", 2, 3), ("S", 1, 1)):
        assert ctx.jet(letter, p, q) == normal_form(JetVariable(letter, p, q).name)


def test_engine_in_special_ring():
    i = Invariants(special_context())
    assert i.A == parse("1") and i.B.is_zero()
    assert i.N == parse("R")
    assert i.phi == (parse("3/5*Q"), parse("6/5*R"))


def test_rewrite_step_is_single_substitution():
    e = parse("Q[0,2]*x")
    once = RS.step(e, ("Q", 0, 2))
    assert once == parse("x*(-S[2,0] + 2*R[1,1] + 2*S*P[0,1] + P*S[0,1] - 3*S*Q[1,0]"
                         " - 3*Q*S[1,0] - 3*R*Q[0,1] + 6*R*R[1,0])")
    assert RS.reduce(once) == normal_form(e)
