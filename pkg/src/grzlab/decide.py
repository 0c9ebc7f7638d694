"""Bounded countermodel search per logic and checks of the displayed lemma formulas.

A countermodel refutes provability.  Exhausting the bound proves nothing
in general: no finite-model bound is computed here, so an exhausted search
is reported as inconclusive and must not be read as a proof.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .formula import Formula, Iff, Var, as_formula, build_axiom
from .frame import FrameClass, enumerate_frames, is_transitive
from .model import (DEFAULT_VALUATION_CAP, SearchReport, class_valid_upto, frame_valid,
                    satisfies)


class LogicId(enum.Enum):
    K = "K"
    S4 = "S4"
    S4_2 = "S4.2"
    S4_3 = "S4.3"
    GRZ = "Grz"
    GRZ_2 = "Grz.2"
    GRZ_3 = "Grz.3"

    @classmethod
    def parse(cls, name: str) -> LogicId:
        for logic in cls:
            if logic.value.lower() == name.strip().lower():
                return logic
        raise ValueError(f"unknown logic {name!r}; known: {', '.join(l.value for l in cls)}")


_SUITES = {
    LogicId.K: ["K"],
    LogicId.S4: ["K", "T", "4"],
    LogicId.S4_2: ["K", "T", "4", ".2"],
    LogicId.S4_3: ["K", "T", "4", ".3"],
    LogicId.GRZ: ["K", "T", "4", "Grz"],
    LogicId.GRZ_2: ["K", "T", "4", "Grz", ".2"],
    LogicId.GRZ_3: ["K", "T", "4", "Grz", ".3"],
}

DEFAULT_CLASS = {
    LogicId.K: FrameClass.ARBITRARY,
    LogicId.S4: FrameClass.PREORDER,
    LogicId.S4_2: FrameClass.DIRECTED_PREORDER,
    LogicId.S4_3: FrameClass.LINEAR_PREORDER,
    LogicId.GRZ: FrameClass.POSET,
    LogicId.GRZ_2: FrameClass.DIRECTED_POSET,
    LogicId.GRZ_3: FrameClass.LINEAR_ORDER,
}

# formulas outside Grz.2, each refutable on every Grz.2-characterizing class
NON_THEOREMS = {
    ".3": "[]([]p -> q) | []([]q -> p)",
    "Alt1": "[]p | []~p",
    "Grz* unboxed": "contingent(p) -> penultimate(p) | penultimate(~p)",
    "p -> []p": "p -> []p",
    "contingent <>[]p": "contingent(p) -> <>[]p",
}

# classes the characterization results say are each enough on their own
CHARACTERIZING_CLASSES = {
    LogicId.K: [FrameClass.ARBITRARY],
    LogicId.S4: [FrameClass.PREORDER],
    LogicId.S4_2: [FrameClass.DIRECTED_PREORDER],
    LogicId.S4_3: [FrameClass.LINEAR_PREORDER],
    LogicId.GRZ: [FrameClass.POSET, FrameClass.TREE],
    LogicId.GRZ_2: [FrameClass.DIRECTED_POSET, FrameClass.LATTICE, FrameClass.BALED_TREE,
                    FrameClass.BOOLEAN_ALGEBRA],
    LogicId.GRZ_3: [FrameClass.LINEAR_ORDER],
}


def _logic(logic) -> LogicId:
    return LogicId.parse(logic) if isinstance(logic, str) else logic


def axiom_suite(logic: LogicId | str) -> list[Formula]:
    return [build_axiom(name) for name in _SUITES[_logic(logic)]]


def axiom_names(logic: LogicId | str) -> list[str]:
    return list(_SUITES[_logic(logic)])


def countermodel_search(logic: LogicId | str, f: Formula | str, nmax: int,
                        class_override: FrameClass | str | None = None,
                        cap: int = DEFAULT_VALUATION_CAP,
                        frame_cap: int | None = None) -> SearchReport:
    """Look for a countermodel to ``f`` on the logic's frames of size up to ``nmax``."""
    logic = _logic(logic)
    c = class_override if class_override is not None else DEFAULT_CLASS[logic]
    report = class_valid_upto(c, as_formula(f), nmax, cap=cap, frame_cap=frame_cap)
    report.logic = logic.value
    return report


# --------------------------------------------------------------------------
# displayed lemma formulas

@dataclass
class LemmaResult:
    item: str
    description: str
    passed: bool
    frames_examined: int = 0
    witness: object = None
    details: list[str] = field(default_factory=list)


# every labeled frame is checked up to this size, one per isomorphism class beyond
LABELED_SWEEP_MAX = 3


def _sweep(c: FrameClass, formulas, nmax: int, keep=None):
    """Validity of ``formulas`` on the frames of ``c`` up to ``nmax`` worlds.

    Returns ``(ok, frames examined, first witness)``.
    """
    count = 0
    for n in range(1, nmax + 1):
        for frame in enumerate_frames(c, n, up_to_iso=n > LABELED_SWEEP_MAX):
            if keep is not None and not keep(frame):
                continue
            count += 1
            for f in formulas:
                result = frame_valid(frame, f)
                if not result:
                    return False, count, result.witness
    return True, count, None


def verify_displayed_lemmas(nmax: int = 4) -> dict[str, LemmaResult]:
    """Exhaustive finite checks of the formulas the Grz* argument relies on.

    (a) the technical lemma formula on every frame;
    (b) the K4 step on every transitive frame;
    (c) Grz equals its disjunctive and concise forms on every frame;
    (d) Grz* holds on every Alt1 frame while some Alt1 frame refutes Grz;
    (e) on preorders, Grz and Grz* are valid on exactly the same frames.
    """
    p = Var("p")
    results = {}

    ok, count, wit = _sweep(FrameClass.ARBITRARY, [build_axiom("TechnicalLemma")], nmax)
    results["a"] = LemmaResult("a", "technical lemma formula valid on all frames", ok, count, wit)

    k4 = build_axiom("K4Step", [Var("a"), Var("b")])
    ok, count, wit = _sweep(FrameClass.ARBITRARY, [k4], nmax, keep=is_transitive)
    results["b"] = LemmaResult("b", "<>(a | <>b) -> <>(a | b) valid on transitive frames",
                               ok, count, wit)

    grz = build_axiom("Grz", [p])
    forms = [Iff(grz, build_axiom("GrzDisjunctive", [p])),
             Iff(grz, build_axiom("GrzConcise", [p]))]
    ok, count, wit = _sweep(FrameClass.ARBITRARY, forms, nmax)
    results["c"] = LemmaResult("c", "Grz <-> disjunctive form <-> concise form on all frames",
                               ok, count, wit)

    grz_star = build_axiom("Grz*", [p])
    star = class_valid_upto(FrameClass.ALT1, grz_star, nmax)
    refute = class_valid_upto(FrameClass.ALT1, grz, nmax)
    results["d"] = LemmaResult(
        "d", "Grz* valid on all Alt1 frames; some Alt1 frame refutes Grz",
        not star.found and refute.found, star.frames_examined,
        refute.witness, [f"Grz refuted on {refute.witness.frame!r}" if refute.found
                         else "no Alt1 frame refutes Grz"])

    count, mismatches = 0, []
    for n in range(1, nmax + 1):
        for frame in enumerate_frames(FrameClass.PREORDER, n, up_to_iso=True):
            count += 1
            if bool(frame_valid(frame, grz)) != bool(frame_valid(frame, grz_star)):
                mismatches.append(repr(frame))
    results["e"] = LemmaResult("e", "preorders: Grz valid iff Grz* valid", not mismatches,
                               count, None, mismatches)
    return results


def recheck_witness(report: SearchReport, f: Formula | str) -> bool:
    """True iff the report's witness really falsifies ``f``."""
    if not report.found:
        return False
    return not satisfies(report.witness, as_formula(f))
