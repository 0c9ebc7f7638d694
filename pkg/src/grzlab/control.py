"""Control statements (buttons, switches, ratchets) and frame/model labelings."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .bisim import are_bisimilar
from .errors import Check, PreconditionError, ResourceLimitError, Violation
from .formula import (BOT, And, Box, Dia, Formula, Imp, Not, conj, disj, jankov_fine,
                      jankov_fine_parts, jankov_fine_var, parse, theta)
from .frame import (Frame, _bits, is_lattice, is_linear, is_poset, least, reachable, sup)
from .model import Model, PointedModel, extension, extension_bits, satisfies

MAX_INDEPENDENT = 5

CONTROL_KINDS = ("button", "switch", "independent_buttons", "independent_switches", "ratchet")


def _subsets(n):
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


def sigma(switches: Sequence[Formula], pattern) -> Formula:
    """Exact switch pattern: the switches in ``pattern`` are on, the rest off."""
    pattern = set(pattern)
    return conj([s for i, s in enumerate(switches) if i in pattern] +
                [Not(s) for i, s in enumerate(switches) if i not in pattern])


def control_conditions(kind: str, stmts: Sequence[Formula],
                       max_independent: int = MAX_INDEPENDENT) -> list[tuple[str, Formula]]:
    """Named conjuncts whose conjunction defines ``kind`` for ``stmts``."""
    kind = kind.replace("-", "_")
    stmts = list(stmts)
    n = len(stmts)
    if kind == "button":
        return [(f"button {b}", Box(Dia(Box(b)))) for b in stmts]
    if kind == "switch":
        return [(f"switch {s}", Box(And(Dia(s), Dia(Not(s))))) for s in stmts]
    if kind in ("independent_buttons", "independent_switches") and n > max_independent:
        raise ResourceLimitError(f"independence sweep limited to {max_independent} statements")
    if kind == "independent_buttons":
        out = [(f"unpushed {b}", Not(Box(b))) for b in stmts]
        for a in _subsets(n):
            larger = [theta(stmts, a_plus) for a_plus in _subsets(n) if set(a) <= set(a_plus)]
            out.append((f"pattern {set(a) or '{}'}",
                        Box(Imp(theta(stmts, a), conj(Dia(t) for t in larger)))))
        return out
    if kind == "independent_switches":
        return [(f"pattern {set(a) or '{}'}", Box(Dia(sigma(stmts, a)))) for a in _subsets(n)]
    if kind == "ratchet":
        out = []
        if stmts:
            out.append(("(1) initially only r0 pushed",
                        conj([Box(stmts[0])] + [Not(Box(r)) for r in stmts[1:]])))
        for i, j in itertools.combinations(range(n), 2):
            out.append((f"(2) pushing r{j} pushes r{i}", Box(Imp(Box(stmts[j]), Box(stmts[i])))))
        for i in range(n):
            step = conj([Box(stmts[i])] + [Not(Box(r)) for r in stmts[i + 1:]])
            out.append((f"(3) r{i} can be pushed alone", Box(Imp(Not(Box(stmts[i])), Dia(step)))))
        return out
    raise ValueError(f"unknown control kind {kind!r}; known: {', '.join(CONTROL_KINDS)}")


def control_formula(kind: str, stmts: Sequence[Formula]) -> Formula:
    return conj(f for _, f in control_conditions(kind, stmts))


def check_control(kind: str, pm: PointedModel, stmts: Sequence[Formula],
                  max_independent: int = MAX_INDEPENDENT) -> Check:
    """Model-check the defining formula of a control statement family at the point.

    Every failing conjunct is reported by name.
    """
    violations = [Violation(name, str(f)) for name, f in
                  control_conditions(kind, stmts, max_independent) if not satisfies(pm, f)]
    return Check.from_violations(violations)


# --------------------------------------------------------------------------
# labelings

@dataclass(frozen=True)
class Labeling:
    frame: Frame
    root: int
    labels: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.labels) != self.frame.size:
            raise ValueError("a labeling needs one formula per node")
        if not 0 <= self.root < self.frame.size:
            raise ValueError("root outside the frame")

    def __getitem__(self, w):
        return self.labels[w]

    def swapped(self, a: int, b: int) -> Labeling:
        labels = list(self.labels)
        labels[a], labels[b] = labels[b], labels[a]
        return Labeling(self.frame, self.root, tuple(labels))

    def replaced(self, w: int, f: Formula) -> Labeling:
        labels = list(self.labels)
        labels[w] = f
        return Labeling(self.frame, self.root, tuple(labels))

    def to_dict(self) -> dict:
        return {"frame": self.frame.to_dict(), "root": self.root,
                "labels": {str(w): str(f) for w, f in enumerate(self.labels)}}

    @classmethod
    def from_dict(cls, data: dict) -> Labeling:
        frame = Frame.from_dict(data["frame"])
        labels = data["labels"]
        return cls(frame, int(data.get("root", 0)),
                   tuple(parse(labels[str(w)]) for w in frame.worlds))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def check_frame_labeling(labeling: Labeling, target: PointedModel) -> Check:
    """Check the three labeling conditions against a pointed model.

    Conditions (2) and (3) are checked at every world reachable from the
    point in zero or more steps.  All violations are collected; their kinds
    are ``"1"``, ``"2"`` and ``"3"``.
    """
    frame = labeling.frame
    model = target.model
    ext = [extension_bits(model, f) for f in labeling.labels]
    dia_ext = [extension_bits(model, Dia(f)) for f in labeling.labels]
    violations = []
    if not ext[labeling.root] >> target.point & 1:
        violations.append(Violation("1", f"label of node {labeling.root} fails at the point"))
    for u in _bits(reachable(model.frame, target.point)):
        here = [w for w in frame.worlds if ext[w] >> u & 1]
        if len(here) != 1:
            violations.append(Violation("3", f"world {u} satisfies labels of nodes {here}"))
        for w in here:
            for w2 in frame.worlds:
                possible = bool(dia_ext[w2] >> u & 1)
                if possible != frame.related(w, w2):
                    rel = "<=" if frame.related(w, w2) else "not <="
                    violations.append(Violation(
                        "2", f"world {u} (node {w}): <>label({w2}) is {possible} but {w} {rel} {w2}"))
    return Check.from_violations(violations)


def self_labeling(frame: Frame, root: int = 0) -> tuple[Labeling, PointedModel]:
    """Label node ``i`` by the variable ``w<i>`` in the model on ``frame`` itself."""
    names = [jankov_fine_var(i) for i in frame.worlds]
    model = Model(frame, {v.name: {i} for i, v in enumerate(names)})
    return Labeling(frame, root, tuple(names)), PointedModel(model, root)


def button_pattern(buttons: Sequence[Formula], pushed, universe) -> Formula:
    """Buttons of ``pushed`` necessary, the other buttons of ``universe`` not."""
    pushed = set(pushed)
    return conj([Box(buttons[s]) for s in universe if s in pushed] +
                [Not(Box(buttons[s])) for s in universe if s not in pushed])


def labeling_from_buttons(frame: Frame, root: int, buttons: Sequence[Formula]) -> Labeling:
    """Label a finite lattice with independent buttons.

    The nodes other than ``root`` get buttons in index order; ``Phi_w`` is
    the disjunction of the exact patterns ``S`` with ``sup S = w``, taking
    ``sup`` of the empty set to be the least element.
    """
    if not is_lattice(frame):
        raise PreconditionError("button labeling needs a lattice")
    if least(frame) != root:
        raise PreconditionError(f"root {root} is not the least element")
    others = [w for w in frame.worlds if w != root]
    if len(buttons) < len(others):
        raise PreconditionError(f"need {len(others)} buttons, got {len(buttons)}")
    assigned = {w: buttons[k] for k, w in enumerate(others)}
    patterns = {w: [] for w in frame.worlds}
    for k in range(len(others) + 1):
        for s in itertools.combinations(others, k):
            patterns[sup(frame, s)].append(button_pattern(assigned, s, others))
    return Labeling(frame, root, tuple(disj(patterns[w]) for w in frame.worlds))


def linear_order_nodes(frame: Frame) -> list[int]:
    """Nodes of a finite linear order from least to greatest."""
    return sorted(frame.worlds, key=lambda w: -len(frame.successors(w)))


def labeling_from_ratchet(frame: Frame, ratchet: Sequence[Formula]) -> Labeling:
    """Label ``w_i`` by "the ratchet is pushed exactly up to ``r_i``"."""
    if not (is_poset(frame) and is_linear(frame)):
        raise PreconditionError("ratchet labeling needs a finite linear order")
    n = frame.size
    if len(ratchet) != n:
        raise PreconditionError(f"linear order of length {n} needs a ratchet of length {n}, "
                                f"got {len(ratchet)}")
    nodes = linear_order_nodes(frame)
    labels = [None] * n
    for i, w in enumerate(nodes):
        labels[w] = Box(ratchet[i]) if i == n - 1 else conj([Box(ratchet[i]), Not(Box(ratchet[i + 1]))])
    return Labeling(frame, nodes[0], tuple(labels))


def model_labeling_from_frame_labeling(model: Model, labeling: Labeling) -> dict[str, Formula]:
    """``psi_p`` is the disjunction of the labels of the nodes where ``p`` holds."""
    if model.frame.size != labeling.frame.size:
        raise ValueError("labeling and model are on frames of different size")
    return {p: disj(labeling.labels[w] for w in sorted(worlds))
            for p, worlds in sorted(model.valuation.items())}


def verify_model_labeling(model: Model, w0: int, target: PointedModel,
                          psi: Mapping[str, Formula]) -> Check:
    """Certify a model labeling by bisimulation.

    ``target`` is re-valued with ``p -> extension(target, psi_p)``; the
    labeling is truth preserving for every formula over the variables of
    ``model`` when ``(model, w0)`` is bisimilar to the re-valued point.
    A variable without a ``psi`` entry is labeled ``false``.
    """
    vocab = model.variables()
    revalued = Model(target.frame, {p: extension(target.model, psi.get(p, BOT)) for p in vocab})
    if are_bisimilar(PointedModel(model, w0), PointedModel(revalued, target.point), vocab):
        return Check(True)
    return Check.from_violations([Violation("bisimulation",
                                            f"world {w0} not bisimilar to the re-valued point")])


def interpret_labels(labeling: Labeling, target: PointedModel) -> PointedModel:
    """Target frame with ``w<i>`` interpreted as the extension of the label of node ``i``."""
    val = {jankov_fine_var(w).name: extension(target.model, f)
           for w, f in enumerate(labeling.labels)}
    return PointedModel(Model(target.frame, val), target.point)


def jankov_fine_holds(labeling: Labeling, target: PointedModel) -> bool:
    return satisfies(interpret_labels(labeling, target), jankov_fine(labeling.frame, labeling.root))


def jankov_fine_failures(labeling: Labeling, target: PointedModel) -> set[str]:
    """Labeling conditions whose Jankov-Fine conjunct fails under the label interpretation."""
    pm = interpret_labels(labeling, target)
    return {str(k) for k, f in jankov_fine_parts(labeling.frame, labeling.root).items()
            if not satisfies(pm, f)}

