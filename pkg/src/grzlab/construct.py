"""Model constructions: baled-tree and tree unravelings, button and ratchet models."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError, ResourceLimitError
from .formula import Var
from .frame import (Frame, chain, covers, greatest, is_directed, is_poset, is_tree,
                    powerset_order, reachable)
from .model import Model, PointedModel

MAX_BUTTONS = 6


@dataclass(frozen=True)
class UnravelResult:
    model: Model
    copy_map: tuple[tuple[int, int], ...]  # (new world, source world)
    point: int = 0

    @property
    def pointed(self) -> PointedModel:
        return PointedModel(self.model, self.point)

    def source(self, new: int) -> int:
        return dict(self.copy_map)[new]

    def to_dict(self) -> dict:
        d = self.pointed.to_dict()
        d["copy_map"] = [list(p) for p in self.copy_map]
        return d


def maximal_chains(frame: Frame, start: int) -> list[tuple[int, ...]]:
    """All maximal chains of intervals ``[start, u]``, as ascending tuples.

    In a finite poset these are the saturated chains, i.e. paths along
    covering pairs starting at ``start``; they come out in depth-first order.
    """
    up = covers(frame)
    out = []

    def walk(path):
        out.append(path)
        for nxt in up[path[-1]]:
            walk(path + (nxt,))

    walk((start,))
    return out


def _copy_valuation(model: Model, sources: list[int]) -> dict[str, set[int]]:
    return {name: {new for new, old in enumerate(sources) if old in worlds}
            for name, worlds in model.valuation.items()}


def unravel_baled(pm: PointedModel) -> UnravelResult:
    """Partial tree unraveling of a finite directed poset into a baled tree.

    Worlds are the pairs ``<u, t>`` with ``t`` a maximal chain of
    ``[point, u]`` (stored as ``t`` alone, since ``u`` is its last element)
    plus one extra world, the bale, copying the greatest element.  The
    order is ``u <= u'`` together with end-extension of the chains, and
    everything lies below the bale.  End-extension already forces
    ``u <= u'``; the conjunction is kept as stated.  The point of the
    result is world 0, the copy of the original point.
    """
    frame = pm.frame
    if not is_poset(frame) or not is_directed(frame):
        raise PreconditionError("baled unraveling needs a directed partial order")
    g = greatest(frame)
    paths = maximal_chains(frame, pm.point)
    bale = len(paths)
    edges = []
    for i, t in enumerate(paths):
        for j, t2 in enumerate(paths):
            if frame.related(t[-1], t2[-1]) and t2[:len(t)] == t:
                edges.append((i, j))
        edges.append((i, bale))
    edges.append((bale, bale))
    sources = [t[-1] for t in paths] + [g]
    result = Model(Frame.from_edges(bale + 1, edges), _copy_valuation(pm.model, sources))
    return UnravelResult(result, tuple(enumerate(sources)), 0)


class _Node:
    __slots__ = ("source", "children")

    def __init__(self, source, children=None):
        self.source = source
        self.children = children or []

    def copy(self):
        return _Node(self.source, [c.copy() for c in self.children])

    def height(self):
        return 1 + max((c.height() for c in self.children), default=-1)

    def branching(self):
        return max([len(self.children)] + [c.branching() for c in self.children])


def unravel_tree(pm: PointedModel, regularize: bool = False) -> UnravelResult:
    """Tree unraveling of a finite poset model from its point.

    With ``regularize`` the tree is padded to a full ``b``-ary tree of
    uniform depth ``d``, where ``b`` is the largest branching and ``d`` the
    height of the plain unraveling (the longest strict chain above the
    point).  Padding duplicates existing children, and leaves above depth
    ``d`` receive copies of themselves; both kinds of dummy are bisimilar to
    their source.
    """
    frame = pm.frame
    if not is_poset(frame):
        raise PreconditionError("tree unraveling needs a partial order")
    up = covers(frame)

    def grow(u):
        return _Node(u, [grow(v) for v in up[u]])

    root = grow(pm.point)
    if regularize:
        b, d = root.branching(), root.height()

        def pad(node, level):
            if level == d:
                return
            if not node.children:
                node.children = [_Node(node.source)]
            base = list(node.children)
            k = 0
            while len(node.children) < b:
                node.children.append(base[k % len(base)].copy())
                k += 1
            for c in node.children:
                pad(c, level + 1)

        pad(root, 0)

    sources, parent = [], []

    def flatten(node, par):
        idx = len(sources)
        sources.append(node.source)
        parent.append(par)
        for c in node.children:
            flatten(c, idx)

    flatten(root, None)
    n = len(sources)
    edges = []
    for i in range(n):
        j = i
        while j is not None:
            edges.append((j, i))
            j = parent[j]
    result = Model(Frame.from_edges(n, edges), _copy_valuation(pm.model, sources))
    return UnravelResult(result, tuple(enumerate(sources)), 0)


def tree_shape(frame: Frame) -> tuple[list[int], list[int]] | None:
    """Depths of the leaves and child counts of the internal nodes of a tree."""
    if not is_tree(frame):
        return None
    root = next(i for i in frame.worlds if reachable(frame, i) == (1 << frame.size) - 1)
    up = covers(frame)
    leaf_depths, branching = [], []

    def walk(w, dpt):
        if up[w]:
            branching.append(len(up[w]))
            for v in up[w]:
                walk(v, dpt + 1)
        else:
            leaf_depths.append(dpt)

    walk(root, 0)
    return leaf_depths, branching


def is_regular_tree(frame: Frame) -> bool:
    """Full b-ary tree with all leaves at the same depth."""
    shape = tree_shape(frame)
    if shape is None:
        return False
    leaf_depths, branching = shape
    return len(set(leaf_depths)) == 1 and len(set(branching)) <= 1


def powerset_button_model(n: int) -> tuple[PointedModel, list[Var]]:
    """Subsets of ``{0..n-1}`` under inclusion, ``b_i`` true at the sets containing ``i``.

    World index equals the subset bitmask, so the point (the empty set) is 0.
    """
    if not 0 <= n <= MAX_BUTTONS:
        raise ResourceLimitError(f"powerset button model limited to 0..{MAX_BUTTONS} buttons")
    frame = powerset_order(n)
    buttons = [Var(f"b{i}") for i in range(n)]
    valuation = {b.name: {s for s in frame.worlds if s >> i & 1} for i, b in enumerate(buttons)}
    return PointedModel(Model(frame, valuation), 0), buttons


def ratchet_chain_model(n: int) -> tuple[PointedModel, list[Var]]:
    """Chain ``w_0 < ... < w_{n-1}`` with ``r_i`` true from ``w_i`` upward."""
    if n < 1:
        raise ValueError("a ratchet needs at least one button")
    frame = chain(n)
    ratchet = [Var(f"r{i}") for i in range(n)]
    valuation = {r.name: set(range(i, n)) for i, r in enumerate(ratchet)}
    return PointedModel(Model(frame, valuation), 0), ratchet
