"""Case assignment for both classifications."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from .contexts import ConcreteContext, OdeCoefficients
from .engine import Invariants
from .errors import CaseViolationError, PoleError
from .rational import RatExpr

ZERO_FLAG = "identically-zero"
NONZERO_FLAG = "generically-nonzero"
UNDEFINED_FLAG = "undefined"

SHR_LABELS = ("ShrGP", "ShrID1", "ShrID2-7-unresolved", "ShrMD")
BGD_LABELS = ("BgdET1", "BgdET2", "BgdET-other-unresolved", "BgdET9")

NOTE_ITEM2 = (
    "The BgdET2 conditions list F != 0, alpha != 0, "
    "Omega != 0, N != 0, yet Omega and N exist only when F = 0. The label "
    "bgd_label uses the F = 0 reading; bgd_label_literal applies the "
    "conditions literally."
)
NOTE_OVERLAP = (
    "The overlap conditions are stated with F != 0; overlap is evaluated "
    "with F = 0, alpha != 0, M != 0, Omega != 0."
)


@dataclass
class ClassificationReport:
    flags: dict
    shr_label: str
    bgd_label: str
    bgd_label_literal: str
    overlap: bool
    branch_used: str | None
    witnesses: dict = field(default_factory=dict)
    zero_locus_warnings: list = field(default_factory=list)
    bgd_raw: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def as_dict(self):
        d = asdict(self)
        d["witnesses"] = {k: {a: str(b) for a, b in v.items()} for k, v in self.witnesses.items()}
        return d


def find_witness(e: RatExpr, rng, tries=200, lo=-7, hi=7):
    """A small-integer point where e is finite and nonzero, or None."""
    for _ in range(tries):
        pt = {"x": rng.randint(lo, hi), "y": rng.randint(lo, hi)}
        try:
            if e.evaluate(pt) != 0:
                return pt
        except PoleError:
            continue
    return None


def _flag(exprs):
    return ZERO_FLAG if all(e.is_zero() for e in exprs) else NONZERO_FLAG


def _is_nonzero(flag):
    return flag == NONZERO_FLAG


def classify(ode: OdeCoefficients, branch="auto", seed=0, base_point=None) -> ClassificationReport:
    rng = random.Random(seed)
    inv = Invariants(ConcreteContext(ode), branch=branch, base_point=base_point)
    flags = {}
    values = {}
    flags["F5"] = _flag([inv.F5])
    values["F5"] = inv.F5
    flags["alpha"] = _flag([inv.A, inv.B])
    values["alpha"] = inv.A if not inv.A.is_zero() else inv.B
    branch_used = None
    notes = [NOTE_ITEM2, NOTE_OVERLAP]
    intermediate = flags["F5"] == ZERO_FLAG and _is_nonzero(flags["alpha"])
    for name in ("N", "M", "Omega"):
        flags[name] = UNDEFINED_FLAG
    if intermediate:
        branch_used = inv.branch
        for name, val in (("N", inv.N), ("M", inv.M), ("Omega", inv.Omega)):
            flags[name] = _flag([val])
            values[name] = val
    # conditions of the second scheme in the given coordinates
    raw = {"J0": _flag([inv.J0]), "beta1": _flag([inv.ladder.beta1]),
           "Gamma0": _flag([inv.ladder.Gamma0])}
    try:
        raw["j0"] = _flag([inv.j0])
    except CaseViolationError:
        raw["j0"] = UNDEFINED_FLAG

    if not _is_nonzero(flags["alpha"]):
        shr = "ShrMD"
    elif _is_nonzero(flags["F5"]):
        shr = "ShrGP"
    elif _is_nonzero(flags["M"]):
        shr = "ShrID1"
    else:
        shr = "ShrID2-7-unresolved"

    if shr == "ShrMD":
        bgd = "BgdET9"
    elif shr == "ShrGP":
        bgd = "BgdET1"
    elif _is_nonzero(flags["Omega"]) and _is_nonzero(flags["N"]):
        bgd = "BgdET2"
    else:
        bgd = "BgdET-other-unresolved"

    # literal reading: needs F != 0 together with Omega, N which are then undefined
    if shr == "ShrMD":
        bgd_literal = "BgdET9"
    elif shr == "ShrGP":
        bgd_literal = "BgdET1 (item-2 conditions undefined: Omega, N need F = 0)"
    else:
        bgd_literal = "not BgdET2 (F = 0 contradicts the literal F != 0)"

    overlap = (intermediate and _is_nonzero(flags["M"]) and _is_nonzero(flags["Omega"]))

    witnesses = {}
    warnings = []
    for name, val in values.items():
        if flags.get(name) == NONZERO_FLAG:
            w = find_witness(val, rng)
            if w is not None:
                witnesses[name] = w
            if not val.is_constant():
                warnings.append(f"{name} = {val} is not constant; points where it "
                                "vanishes or is singular do not change the case")
    return ClassificationReport(flags, shr, bgd, bgd_literal, overlap, branch_used,
                                witnesses, warnings, raw, notes)


def correspondence_table():
    """Pairing of the two classifications."""
    rows = [("ShrGP", "BgdET1", "")]
    rows.append(("ShrID1", "BgdET2", "classes do not coincide; substantial overlap only"))
    for k in range(2, 8):
        rows.append((f"ShrID{k}", f"BgdET{k + 1}", ""))
    rows.append(("ShrMD", "BgdET9", ""))
    return rows


__all__ = [
    "ClassificationReport",
    "classify",
    "correspondence_table",
    "find_witness",
    "ZERO_FLAG",
    "NONZERO_FLAG",
    "UNDEFINED_FLAG",
]
