"""Bisimulations between finite models over a chosen vocabulary."""

from __future__ import annotations

from typing import Iterable

from .errors import Check, Violation
from .frame import _bits
from .model import Model, PointedModel


def _vocab(m1: Model, m2: Model, vocab):
    if vocab is None:
        return sorted(set(m1.valuation) | set(m2.valuation))
    return sorted(vocab)


def bisimilarity_classes(m1: Model, m2: Model, vocab: Iterable[str] | None = None) -> list[int]:
    """Block index for every world of the disjoint union ``m1 + m2``.

    Worlds of ``m2`` are numbered after those of ``m1``.  Refinement starts
    from agreement on ``vocab`` and splits blocks by the set of successor
    blocks until nothing changes.
    """
    vocab = _vocab(m1, m2, vocab)
    n1 = m1.size
    succ = [list(_bits(r)) for r in m1.frame.rows] + \
           [[n1 + j for j in _bits(r)] for r in m2.frame.rows]
    sig = [tuple(w in m1.valuation.get(p, ()) for p in vocab) for w in range(n1)] + \
          [tuple(w in m2.valuation.get(p, ()) for p in vocab) for w in range(m2.size)]
    block = _renumber(sig)
    while True:
        refined = _renumber([(block[x], frozenset(block[y] for y in succ[x]))
                             for x in range(len(succ))])
        if max(refined) == max(block):
            return refined
        block = refined


def _renumber(keys):
    ids = {}
    return [ids.setdefault(k, len(ids)) for k in keys]


def largest_bisimulation(m1: Model, m2: Model,
                         vocab: Iterable[str] | None = None) -> frozenset[tuple[int, int]]:
    block = bisimilarity_classes(m1, m2, vocab)
    n1 = m1.size
    return frozenset((a, b) for a in range(n1) for b in range(m2.size)
                     if block[a] == block[n1 + b])


def are_bisimilar(p1: PointedModel, p2: PointedModel, vocab: Iterable[str] | None = None) -> bool:
    block = bisimilarity_classes(p1.model, p2.model, vocab)
    return block[p1.point] == block[p1.model.size + p2.point]


def is_bisimulation(z: Iterable[tuple[int, int]], m1: Model, m2: Model,
                    vocab: Iterable[str] | None = None) -> Check:
    """Check atom agreement, forth and back for every pair of ``z``.

    Stops at the first failing pair; the violation kind is ``"range"``,
    ``"atom"``, ``"forth"`` or ``"back"``.
    """
    vocab = _vocab(m1, m2, vocab)
    z = sorted(set(z))
    zset = set(z)
    for a, b in z:
        if not (0 <= a < m1.size and 0 <= b < m2.size):
            return Check.from_violations([Violation("range", f"pair ({a}, {b}) out of range")])
        for p in vocab:
            if (a in m1.valuation.get(p, ())) != (b in m2.valuation.get(p, ())):
                return Check.from_violations(
                    [Violation("atom", f"({a}, {b}) disagree on {p}")])
        succ2 = list(_bits(m2.frame.rows[b]))
        for a2 in _bits(m1.frame.rows[a]):
            if not any((a2, b2) in zset for b2 in succ2):
                return Check.from_violations(
                    [Violation("forth", f"({a}, {b}): successor {a2} of {a} unmatched")])
        succ1 = list(_bits(m1.frame.rows[a]))
        for b2 in succ2:
            if not any((a2, b2) in zset for a2 in succ1):
                return Check.from_violations(
                    [Violation("back", f"({a}, {b}): successor {b2} of {b} unmatched")])
    return Check(True)
