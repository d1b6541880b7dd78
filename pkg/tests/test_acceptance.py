"""Acceptance criteria, one test and one PASS/FAIL line each.

Three criteria fail by design; their fixtures are contradicted by
independent computation and the tests are left red rather than adjusted.
"""

import random
import time

from odekit import ConcreteContext, Invariants, ReductionSystem, normal_form, parse
from odekit.classify import classify
from odekit.errors import CaseViolationError, PoleError
from odekit.examples import example
from odekit.jets import total_derivative
from odekit.rational import RatExpr
from odekit.special import eliminated_jets
from odekit.transform import random_transformation, transform_ode, weight_check
from odekit.verify import expressibility_check, run_suite, theta_gate, transforms


def _status(rep):
    return {r.id: r for r in rep.results}


def _bad(results):
    return [f"{r.id}={r.status}" for r in results if not r.ok]


# 1 ------------------------------------------------------------------------


def test_criterion_1_unconditional_identities(criterion):
    t0 = time.perf_counter()
    rep = run_suite("unconditional")
    dt = time.perf_counter() - t0
    exact = all(r.mode == "expand" and not r.downgraded for r in rep.results)
    ok = rep.ok and exact and dt < 10.0
    assert criterion(1, ok, f"{len(rep.results)} expansion identities, "
                            f"failures {_bad(rep.results)}, {dt:.2f} s (limit 10 s)")


# 2 ------------------------------------------------------------------------

REFERENCE_VALUES = (
    "special-A-B", "special-alpha-beta-vectors", "special-G-H", "special-N", "special-Omega",
    "special-M", "special-gamma-covector", "special-phi", "special-beta-ladder",
    "special-gamma-ladder", "special-Gamma-ladder", "special-connection",
    "M-as-alpha-gamma-determinant", "special-j2-j3", "special-j5", "special-grad-Omega",
)


def test_criterion_2_special_values(criterion):
    t0 = time.perf_counter()
    rep = run_suite("special", ids=set(REFERENCE_VALUES) | {"detR-value-as-stated",
                                                           "detR-value-corrected"})
    dt = time.perf_counter() - t0
    by = _status(rep)
    values_ok = all(by[i].status == "pass" for i in REFERENCE_VALUES)
    # the determinant must match the reference coefficient, not only the corrected one
    literal = by["detR-value-as-stated"].status == "pass"
    corrected = by["detR-value-corrected"].status == "pass"
    ok = values_ok and literal and dt < 60.0
    assert criterion(2, ok, f"{len(REFERENCE_VALUES)} values exact: {values_ok}; determinant "
                            f"with reference coefficient -36/35: {literal} (residual "
                            f"{by['detR-value-as-stated'].residual}); with coefficient -36/25: "
                            f"{corrected}; {dt:.2f} s (limit 60 s)")


# 3 ------------------------------------------------------------------------

LEMMAS = ("j0-vs-Omega", "j1-vs-M", "j4-vs-N", "j5-vs-detR", "I1Bgd-vs-I2", "nabla-N",
          "nabla-M", "Omega-squared", "nabla-Omega")


def test_criterion_3_comparison_lemmas(criterion):
    rep = run_suite("special", ids=set(LEMMAS))
    ok = rep.ok and len(rep.results) == len(LEMMAS) and all(
        r.mode == "reduce" for r in rep.results)
    assert criterion(3, ok, f"{len(rep.results)} reduce-mode relations, "
                            f"failures {_bad(rep.results)}")


# 4 ------------------------------------------------------------------------

FRAME = ("frame-zero-coefficients", "frame-N-coefficients", "frame-antisymmetric-pair",
         "frame-coefficient-212")
FRAME_TYPOS = ("frame-coefficient-212-minus-signs", "I3-dropped-exponent-not-scalar")


def test_criterion_4_frame_coefficients(criterion):
    rep = run_suite("all", ids=set(FRAME + FRAME_TYPOS))
    by = _status(rep)
    ok = all(by[i].status == "pass" for i in FRAME) and all(
        by[i].status == "expected-fail" for i in FRAME_TYPOS)
    assert criterion(4, ok, "relations "
                            + ", ".join(f"{i}={by[i].status}" for i in FRAME + FRAME_TYPOS))


# 5 ------------------------------------------------------------------------

WEIGHT_FIELDS = {
    "E3": ("F5", "alpha", "beta"),
    "E4": ("F5", "alpha", "beta", "N", "Omega", "M", "gamma", "detR", "I1", "I2", "I3"),
}


def test_criterion_5_weight_law(criterion):
    t0 = time.perf_counter()
    fails, runs = [], 0
    maps = transforms()
    assert len(maps) >= 3 and any(n.startswith("shear") for n, _ in maps)
    for ex, fields in WEIGHT_FIELDS.items():
        for field in fields:
            for k, (tname, t) in enumerate(maps):
                rep = weight_check(example(ex), t, field, trials=20, seed=k)
                runs += 1
                if not rep.passed:
                    fails.append(f"{ex}/{field}/{tname}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 120.0
    assert criterion(5, ok, f"{runs} field/map pairs x 20 trials on E3, E4 over "
                            f"{len(maps)} maps; failures {fails}; {dt:.1f} s (limit 120 s)")


# 6 ------------------------------------------------------------------------

CORPUS_LABELS = {"E1": ("ShrMD", "BgdET9"), "E3": ("ShrGP", "BgdET1"), "E4": ("ShrID1", None)}
E3_F5_FIXTURE = "8*x^2 - 8*y^2"
E4_FIXTURES = {"A": "2 - 6*y", "N": "-6*y", "M": "12 + 36*y - 432/5*y^2"}


def test_criterion_6_classifier_corpus(criterion):
    notes, ok = [], True
    for ex, (shr, bgd) in CORPUS_LABELS.items():
        rep = classify(example(ex))
        if rep.shr_label != shr or (bgd and rep.bgd_label != bgd):
            ok = False
            notes.append(f"{ex} -> {rep.shr_label}/{rep.bgd_label}")
    e2 = classify(example("E2"))
    e2_ok = (e2.flags["F5"] == "identically-zero" and e2.flags["N"] == "identically-zero"
             and e2.flags["M"] == "identically-zero" and e2.shr_label != "ShrID1")
    ok &= e2_ok
    e4 = Invariants(ConcreteContext(example("E4")))
    for name, text in E4_FIXTURES.items():
        if e4.value(name)[0] != parse(text):
            ok = False
            notes.append(f"E4 {name} mismatch")
    f5 = Invariants(ConcreteContext(example("E3"))).F5
    if f5 != parse(E3_F5_FIXTURE):
        ok = False
        notes.append(f"E3 F5 is {f5}, fixture {E3_F5_FIXTURE}")
    for ex in ("E1", "E2", "E3", "E4"):
        base = classify(example(ex))
        for k in range(5):
            rep = classify(transform_ode(example(ex), random_transformation(random.Random(k))))
            if (rep.shr_label, rep.bgd_label) != (base.shr_label, base.bgd_label):
                ok = False
                notes.append(f"{ex} label changed under map {k}")
    assert criterion(6, ok, "labels, E2 flags, E4 fixtures, invariance under 5 maps; "
                            f"problems {notes}")


# 7 ------------------------------------------------------------------------


def test_criterion_7_theta_gate(criterion):
    try:
        rep = theta_gate()
        ok, detail = True, ", ".join(f"{r.id}={r.status}" for r in rep.results)
    except Exception as exc:  # the gate raises on any mismatch
        ok, detail = False, str(exc)
    assert criterion(7, ok, f"default theta gate: {detail}")


# 8 ------------------------------------------------------------------------


def test_criterion_8_two_routes(criterion):
    try:
        rep = expressibility_check(example("E4"), points=10, seed=0)
        ok = rep.agree and len(rep.points) == 10
        detail = f"E4: {len(rep.points) - len(rep.mismatches)}/{len(rep.points)} points agree"
    except CaseViolationError as exc:
        ok = False
        sub = expressibility_check(example("E5"), points=10, seed=0)
        detail = (f"E4 is outside the hypotheses ({exc}); substitute E5: "
                  f"{len(sub.points) - len(sub.mismatches)}/{len(sub.points)} points agree")
    assert criterion(8, ok, detail)


# 9 ------------------------------------------------------------------------

CASES = 100
VARS = ("x", "y", "P", "Q[0,1]", "R[1,0]")
JETS = ("P", "Q", "R", "S", "P[0,2]", "Q[0,2]", "S[1,0]", "P[1,2]", "Q[0,3]", "S[1,2]",
        "R[2,1]", "P[0,1]")


def rand_poly(rng, names=VARS, terms=4, deg=2):
    e = RatExpr.from_int(0)
    for _ in range(rng.randint(1, terms)):
        t = RatExpr.from_int(rng.randint(-9, 9))
        for _ in range(rng.randint(0, deg)):
            t = t * RatExpr.var(rng.choice(names))
        e = e + t
    return e


def rand_nonzero(rng, **kw):
    e = rand_poly(rng, **kw)
    return e if not e.is_zero() else RatExpr.from_int(rng.randint(1, 9))


def rand_point(rng):
    return {n: rng.randint(-20, 20) for n in VARS}


def test_criterion_9_kernel_properties(criterion):
    rng = random.Random(20241015)
    RS = ReductionSystem()
    counts = dict(canonical=0, homomorphism=0, commute=0, idempotent=0, order=0)
    fails = dict.fromkeys(counts, 0)
    while counts["canonical"] < CASES:
        a, b, c = rand_poly(rng), rand_nonzero(rng), rand_nonzero(rng)
        e1, e2 = (a * c) / (b * c), a / b
        fails["canonical"] += not (e1 == e2 and str(e1) == str(e2))
        counts["canonical"] += 1
    while counts["homomorphism"] < CASES:
        a = rand_poly(rng) / rand_nonzero(rng)
        b = rand_poly(rng) / rand_nonzero(rng)
        pt = rand_point(rng)
        try:
            va, vb = a.evaluate(pt), b.evaluate(pt)
            ok = (a + b).evaluate(pt) == va + vb and (a * b).evaluate(pt) == va * vb
        except PoleError:
            continue
        fails["homomorphism"] += not ok
        counts["homomorphism"] += 1
    while counts["commute"] < CASES:
        e = rand_poly(rng, names=("x", "y") + JETS, deg=3)
        if rng.random() < 0.5:
            e = e / (RatExpr.var(rng.choice(JETS)) + rng.randint(1, 3))
        dxy = total_derivative(total_derivative(e, "y"), "x")
        dyx = total_derivative(total_derivative(e, "x"), "y")
        fails["commute"] += dxy != dyx
        counts["commute"] += 1
    while counts["order"] < CASES:
        e = rand_poly(rng, names=("x", "y") + JETS, deg=3)
        nf = normal_form(e)
        fails["idempotent"] += bool(eliminated_jets(nf)) or normal_form(nf) != nf
        counts["idempotent"] += 1
        shuffled = RS.reduce(e, strategy="random", rng=random.Random(rng.random()))
        fails["order"] += not (shuffled == RS.reduce(e) == nf)
        counts["order"] += 1
    ok = not any(fails.values())
    assert criterion(9, ok, ", ".join(f"{k} {counts[k] - fails[k]}/{counts[k]}"
                                      for k in counts))
