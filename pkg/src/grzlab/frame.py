"""Finite Kripke frames, class recognizers and enumeration up to isomorphism.

A frame on ``n`` worlds stores its relation as ``n`` row bitsets: bit ``j``
of ``rows[i]`` is set iff ``i R j``.  Worlds are ``0 .. n-1``.

Antiwellfoundedness is not tracked separately: on a finite reflexive
transitive frame it is the same thing as antisymmetry.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

from .errors import PreconditionError, ResourceLimitError

# canonical forms minimize over permutations; fine up to this size
MAX_CANONICAL_SIZE = 8


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Frame:
    size: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a frame needs at least one world")
        if len(self.rows) != self.size:
            raise ValueError("need one row per world")
        full = (1 << self.size) - 1
        if any(r & ~full for r in self.rows):
            raise ValueError("edge endpoint out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] = ()) -> Frame:
        rows = [0] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for {n} worlds")
            rows[i] |= 1 << j
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix) -> Frame:
        n = len(matrix)
        return cls.from_edges(n, [(i, j) for i in range(n) for j in range(n) if matrix[i][j]])

    @classmethod
    def from_order(cls, n: int, leq) -> Frame:
        """Frame whose relation is ``{(i, j) : leq(i, j)}``."""
        return cls.from_edges(n, [(i, j) for i in range(n) for j in range(n) if leq(i, j)])

    @property
    def worlds(self) -> range:
        return range(self.size)

    def related(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def successors(self, i: int) -> list[int]:
        return list(_bits(self.rows[i]))

    @cached_property
    def predecessor_rows(self) -> tuple[int, ...]:
        cols = [0] * self.size
        for i, row in enumerate(self.rows):
            for j in _bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    def predecessors(self, j: int) -> list[int]:
        return list(_bits(self.predecessor_rows[j]))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.worlds for j in _bits(self.rows[i])]

    def restrict(self, worlds: Iterable[int]) -> Frame:
        """Subframe on ``worlds``; the new index of a world is its position in ``worlds``."""
        worlds = list(worlds)
        index = {w: k for k, w in enumerate(worlds)}
        return Frame.from_edges(len(worlds), [(index[i], index[j]) for i in worlds
                                              for j in _bits(self.rows[i]) if j in index])

    def permute(self, perm) -> Frame:
        """Relabel world ``i`` as ``perm[i]``."""
        rows = [0] * self.size
        for i, row in enumerate(self.rows):
            new = 0
            for j in _bits(row):
                new |= 1 << perm[j]
            rows[perm[i]] = new
        return Frame(self.size, tuple(rows))

    def leq(self, i: int, j: int) -> bool:
        return self.related(i, j)

    def __repr__(self):
        return f"Frame({self.size}, edges={self.edges()})"

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {"worlds": self.size, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_dict(cls, data: dict) -> Frame:
        frame = cls.from_edges(int(data["worlds"]), [tuple(e) for e in data.get("edges", [])])
        close = data.get("close") or {}
        if close.get("reflexive") or close.get("transitive"):
            frame = closure(frame, reflexive=bool(close.get("reflexive")),
                            transitive=bool(close.get("transitive")))
        return frame

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> Frame:
        return cls.from_dict(json.loads(text))


# --------------------------------------------------------------------------
# small standard frames

def chain(n: int) -> Frame:
    """Reflexive-transitive chain ``0 < 1 < ... < n-1``."""
    return Frame.from_order(n, lambda i, j: i <= j)


def antichain(n: int) -> Frame:
    return Frame.from_order(n, lambda i, j: i == j)


def powerset_order(k: int) -> Frame:
    """Subsets of ``{0..k-1}`` under inclusion; world index = subset bitmask."""
    return Frame.from_order(1 << k, lambda a, b: a & ~b == 0)


def diamond() -> Frame:
    """Bottom 0, atoms 1 and 2, top 3."""
    return powerset_order(2)


def cluster(n: int) -> Frame:
    return Frame.from_order(n, lambda i, j: True)


# --------------------------------------------------------------------------
# closures and generated subframes

def closure(frame: Frame, reflexive: bool = True, transitive: bool = True) -> Frame:
    rows = list(frame.rows)
    if reflexive:
        rows = [r | 1 << i for i, r in enumerate(rows)]
    if transitive:
        # Warshall on bitsets
        for k in range(frame.size):
            bit = 1 << k
            rk = rows[k]
            for i in range(frame.size):
                if rows[i] & bit:
                    rows[i] |= rk
    return Frame(frame.size, tuple(rows))


def reachable(frame: Frame, w: int) -> int:
    """Bitset of worlds reachable from ``w`` in zero or more steps."""
    seen = 1 << w
    frontier = seen
    while frontier:
        nxt = 0
        for i in _bits(frontier):
            nxt |= frame.rows[i]
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def generated_subframe(frame: Frame, w: int) -> tuple[Frame, list[int]]:
    """Subframe generated by ``w``; returns it with ``new index -> old index``.

    ``w`` becomes world 0, the rest keep their relative order.
    """
    worlds = [w] + [v for v in _bits(reachable(frame, w)) if v != w]
    return frame.restrict(worlds), worlds


# --------------------------------------------------------------------------
# properties

class FrameClass(enum.Enum):
    ARBITRARY = "arbitrary"
    PREORDER = "preorder"
    DIRECTED_PREORDER = "directed-preorder"
    LINEAR_PREORDER = "linear-preorder"
    POSET = "poset"
    DIRECTED_POSET = "directed"
    LATTICE = "lattice"
    BOOLEAN_ALGEBRA = "boolean"
    LINEAR_ORDER = "linear"
    TREE = "tree"
    BALED_TREE = "baled-tree"
    ALT1 = "alt1"

    @classmethod
    def parse(cls, name: str) -> FrameClass:
        key = name.strip().lower().replace("_", "-")
        key = _CLASS_ALIASES.get(key, key)
        for c in cls:
            if c.value == key:
                return c
        raise ValueError(f"unknown frame class {name!r}; known: {', '.join(c.value for c in cls)}")


_CLASS_ALIASES = {
    "any": "arbitrary", "all": "arbitrary", "k": "arbitrary",
    "partial-order": "poset", "directed-poset": "directed",
    "boolean-algebra": "boolean", "ba": "boolean",
    "linear-order": "linear", "chain": "linear",
    "baled": "baled-tree", "baledtree": "baled-tree",
}

PROPERTY_NAMES = (
    "reflexive", "transitive", "antisymmetric", "directed", "linear", "lattice",
    "boolean_algebra", "tree", "baled_tree", "alt1", "has_least", "has_greatest",
)


def is_reflexive(f: Frame) -> bool:
    return all(r >> i & 1 for i, r in enumerate(f.rows))


def is_transitive(f: Frame) -> bool:
    for i, r in enumerate(f.rows):
        for j in _bits(r):
            if f.rows[j] & ~r:
                return False
    return True


def is_antisymmetric(f: Frame) -> bool:
    return not any(f.related(j, i) for i, j in f.edges() if i != j)


def is_preorder(f: Frame) -> bool:
    return is_reflexive(f) and is_transitive(f)


def is_poset(f: Frame) -> bool:
    return is_preorder(f) and is_antisymmetric(f)


def is_directed(f: Frame) -> bool:
    """Every two worlds have a common successor."""
    return all(f.rows[i] & f.rows[j] for i in f.worlds for j in range(i, f.size))


def is_linear(f: Frame) -> bool:
    return all(f.related(i, j) or f.related(j, i) for i in f.worlds for j in range(i, f.size))


def is_alt1(f: Frame) -> bool:
    return all(r & (r - 1) == 0 for r in f.rows)


def least(f: Frame) -> int | None:
    full = (1 << f.size) - 1
    for i, r in enumerate(f.rows):
        if r == full:
            return i
    return None


def greatest(f: Frame) -> int | None:
    full = (1 << f.size) - 1
    for j, c in enumerate(f.predecessor_rows):
        if c == full:
            return j
    return None


def _least_of(f: Frame, mask: int) -> int | None:
    for i in _bits(mask):
        if f.rows[i] & mask == mask:
            return i
    return None


def _greatest_of(f: Frame, mask: int) -> int | None:
    for j in _bits(mask):
        if f.predecessor_rows[j] & mask == mask:
            return j
    return None


def upper_bounds(f: Frame, worlds: Iterable[int]) -> int:
    mask = (1 << f.size) - 1
    for s in worlds:
        mask &= f.rows[s]
    return mask


def lower_bounds(f: Frame, worlds: Iterable[int]) -> int:
    mask = (1 << f.size) - 1
    for s in worlds:
        mask &= f.predecessor_rows[s]
    return mask


def sup(f: Frame, worlds: Iterable[int]) -> int | None:
    """Least upper bound in a poset, or None.  ``sup([])`` is the least element."""
    return _least_of(f, upper_bounds(f, worlds))


def inf(f: Frame, worlds: Iterable[int]) -> int | None:
    """Greatest lower bound in a poset, or None.  ``inf([])`` is the greatest element."""
    return _greatest_of(f, lower_bounds(f, worlds))


def is_lattice(f: Frame) -> bool:
    if not is_poset(f):
        return False
    return all(sup(f, (i, j)) is not None and inf(f, (i, j)) is not None
               for i in f.worlds for j in range(i + 1, f.size))


def is_boolean_algebra(f: Frame) -> bool:
    n = f.size
    if n & (n - 1) or not is_lattice(f):
        return False
    bottom, top = least(f), greatest(f)
    join = [[sup(f, (i, j)) for j in f.worlds] for i in f.worlds]
    meet = [[inf(f, (i, j)) for j in f.worlds] for i in f.worlds]
    for a in f.worlds:
        if not any(join[a][b] == top and meet[a][b] == bottom for b in f.worlds):
            return False
    for a, b, c in itertools.product(f.worlds, repeat=3):
        if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
            return False
    return True


def _is_tree_on(f: Frame, mask: int) -> bool:
    """Tree test for the poset ``f`` restricted to the worlds in ``mask``."""
    if not mask or _least_of(f, mask) is None:
        return False
    for w in _bits(mask):
        down = f.predecessor_rows[w] & mask
        for a in _bits(down):
            for b in _bits(down):
                if not (f.related(a, b) or f.related(b, a)):
                    return False
    return True


def is_tree(f: Frame) -> bool:
    """Poset with a least element whose principal down-sets are chains."""
    return is_poset(f) and _is_tree_on(f, (1 << f.size) - 1)


def is_baled_tree(f: Frame) -> bool:
    """Poset with a greatest element whose removal leaves a (non-empty) tree."""
    if not is_poset(f):
        return False
    top = greatest(f)
    if top is None:
        return False
    return _is_tree_on(f, ((1 << f.size) - 1) & ~(1 << top))


def properties(f: Frame) -> frozenset[str]:
    flags = {
        "reflexive": is_reflexive(f),
        "transitive": is_transitive(f),
        "antisymmetric": is_antisymmetric(f),
        "directed": is_directed(f),
        "linear": is_linear(f),
        "lattice": is_lattice(f),
        "boolean_algebra": is_boolean_algebra(f),
        "tree": is_tree(f),
        "baled_tree": is_baled_tree(f),
        "alt1": is_alt1(f),
        "has_least": least(f) is not None,
        "has_greatest": greatest(f) is not None,
    }
    return frozenset(k for k, v in flags.items() if v)


_CLASS_TESTS = {
    FrameClass.ARBITRARY: lambda f: True,
    FrameClass.PREORDER: is_preorder,
    FrameClass.DIRECTED_PREORDER: lambda f: is_preorder(f) and is_directed(f),
    FrameClass.LINEAR_PREORDER: lambda f: is_preorder(f) and is_linear(f),
    FrameClass.POSET: is_poset,
    FrameClass.DIRECTED_POSET: lambda f: is_poset(f) and is_directed(f),
    FrameClass.LATTICE: is_lattice,
    FrameClass.BOOLEAN_ALGEBRA: is_boolean_algebra,
    FrameClass.LINEAR_ORDER: lambda f: is_poset(f) and is_linear(f),
    FrameClass.TREE: is_tree,
    FrameClass.BALED_TREE: is_baled_tree,
    FrameClass.ALT1: is_alt1,
}


def check_class(f: Frame, c: FrameClass | str) -> bool:
    if isinstance(c, str):
        c = FrameClass.parse(c)
    return _CLASS_TESTS[c](f)


def require_poset(f: Frame, what: str = "frame"):
    if not is_poset(f):
        raise PreconditionError(f"{what} is not a partial order")


# --------------------------------------------------------------------------
# isomorphism

def _invariant(f: Frame, i: int):
    r = f.rows[i]
    return (r >> i & 1, bin(r).count("1"), bin(f.predecessor_rows[i]).count("1"))


def canonical_form(f: Frame) -> Frame:
    """Canonical representative of the isomorphism class of ``f``.

    Worlds are first ordered by an isomorphism-invariant key, then every
    permutation within equal-key blocks is tried and the lexicographically
    greatest row sequence kept.  Posets come out with the least element
    first when there is one.
    """
    if f.size > MAX_CANONICAL_SIZE:
        raise ResourceLimitError(f"canonical form limited to {MAX_CANONICAL_SIZE} worlds")
    keys = [_invariant(f, i) for i in f.worlds]
    order = sorted(f.worlds, key=lambda i: keys[i], reverse=True)
    blocks = [list(g) for _, g in itertools.groupby(order, key=lambda i: keys[i])]
    best = None
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        seq = [w for block in choice for w in block]  # seq[new] = old
        perm = [0] * f.size
        for new, old in enumerate(seq):
            perm[old] = new
        cand = f.permute(perm).rows
        if best is None or cand > best:
            best = cand
    return Frame(f.size, best)


def are_isomorphic(f: Frame, g: Frame) -> bool:
    return f.size == g.size and canonical_form(f) == canonical_form(g)


def find_isomorphism(f: Frame, g: Frame) -> list[int] | None:
    """Brute-force search for ``perm`` with ``f.permute(perm) == g``."""
    if f.size != g.size or sorted(map(_popcount, f.rows)) != sorted(map(_popcount, g.rows)):
        return None
    for perm in itertools.permutations(range(f.size)):
        if f.permute(perm) == g:
            return list(perm)
    return None


def _popcount(x):
    return bin(x).count("1")


# --------------------------------------------------------------------------
# enumeration

def _ideals(f: Frame) -> list[int]:
    """All down-closed subsets of the poset ``f`` as bitsets."""
    out = []
    for mask in range(1 << f.size):
        if all(f.predecessor_rows[i] & ~mask == 0 for i in _bits(mask)):
            out.append(mask)
    return out


def _filters(f: Frame) -> list[int]:
    out = []
    for mask in range(1 << f.size):
        if all(f.rows[i] & ~mask == 0 for i in _bits(mask)):
            out.append(mask)
    return out


def _add_world(f: Frame, down: int, up: int) -> Frame:
    """Append world ``n`` strictly above ``down`` and strictly below ``up``."""
    n = f.size
    new = 1 << n
    rows = [r | (new if down >> i & 1 else 0) for i, r in enumerate(f.rows)]
    rows.append(new | up)
    return Frame(n + 1, tuple(rows))


@lru_cache(maxsize=None)
def _labeled_posets(n: int) -> tuple[Frame, ...]:
    if n == 1:
        return (Frame(1, (1,)),)
    out = []
    for p in _labeled_posets(n - 1):
        ideals, filters = _ideals(p), _filters(p)
        for down in ideals:
            above = upper_bounds(p, _bits(down))
            for up in filters:
                if up & down == 0 and up & ~above == 0:
                    out.append(_add_world(p, down, up))
    return tuple(out)


@lru_cache(maxsize=None)
def _poset_reps(n: int) -> tuple[Frame, ...]:
    if n == 1:
        return (Frame(1, (1,)),)
    seen = {}
    for p in _poset_reps(n - 1):
        # every poset arises by adding a new maximal world
        for down in _ideals(p):
            c = canonical_form(_add_world(p, down, 0))
            seen.setdefault(c.rows, c)
    return tuple(seen[k] for k in sorted(seen, reverse=True))


def _blow_up(p: Frame, sizes) -> Frame:
    """Replace world ``i`` of ``p`` by a cluster of ``sizes[i]`` worlds."""
    owner = [i for i, s in enumerate(sizes) for _ in range(s)]
    return Frame.from_order(len(owner), lambda a, b: p.related(owner[a], owner[b]))


def _compositions(n: int, k: int):
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(k))


def _set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def _labeled_preorders(n: int) -> tuple[Frame, ...]:
    out = []
    for blocks in _set_partitions(range(n)):
        k = len(blocks)
        owner = [0] * n
        for b, block in enumerate(blocks):
            for w in block:
                owner[w] = b
        for p in _labeled_posets(k):
            out.append(Frame.from_order(n, lambda a, c: p.related(owner[a], owner[c])))
    return tuple(out)


@lru_cache(maxsize=None)
def _preorder_reps(n: int) -> tuple[Frame, ...]:
    seen = {}
    for k in range(1, n + 1):
        for p in _poset_reps(k):
            for sizes in _compositions(n, k):
                c = canonical_form(_blow_up(p, sizes))
                seen.setdefault(c.rows, c)
    return tuple(seen[k] for k in sorted(seen, reverse=True))


def _all_relations(n: int) -> Iterator[Frame]:
    for code in range(1 << (n * n)):
        yield Frame(n, tuple((code >> (i * n)) & ((1 << n) - 1) for i in range(n)))


def _alt1_frames(n: int) -> Iterator[Frame]:
    for succ in itertools.product(range(n + 1), repeat=n):
        yield Frame(n, tuple(0 if s == n else 1 << s for s in succ))


def _distinct(frames: Iterable[Frame]) -> Iterator[Frame]:
    seen = set()
    for f in frames:
        c = canonical_form(f)
        if c.rows not in seen:
            seen.add(c.rows)
            yield c


def _all_permutations_of(f: Frame) -> Iterator[Frame]:
    seen = set()
    for perm in itertools.permutations(range(f.size)):
        g = f.permute(perm)
        if g.rows not in seen:
            seen.add(g.rows)
            yield g


def _source(c: FrameClass, n: int, up_to_iso: bool) -> Iterable[Frame]:
    if c is FrameClass.LINEAR_ORDER:
        return [chain(n)] if up_to_iso else _all_permutations_of(chain(n))
    if c is FrameClass.BOOLEAN_ALGEBRA:
        if n & (n - 1):
            return []
        k = n.bit_length() - 1
        ba = canonical_form(powerset_order(k)) if up_to_iso else powerset_order(k)
        return [ba] if up_to_iso else _all_permutations_of(ba)
    if c in (FrameClass.POSET, FrameClass.DIRECTED_POSET, FrameClass.LATTICE,
             FrameClass.TREE, FrameClass.BALED_TREE):
        return _poset_reps(n) if up_to_iso else _labeled_posets(n)
    if c in (FrameClass.PREORDER, FrameClass.DIRECTED_PREORDER, FrameClass.LINEAR_PREORDER):
        return _preorder_reps(n) if up_to_iso else _labeled_preorders(n)
    if c is FrameClass.ALT1:
        return _distinct(_alt1_frames(n)) if up_to_iso else _alt1_frames(n)
    return _distinct(_all_relations(n)) if up_to_iso else _all_relations(n)


def enumerate_frames(c: FrameClass | str, n: int, up_to_iso: bool = True,
                     cap: int | None = None) -> Iterator[Frame]:
    """All frames of class ``c`` on exactly ``n`` worlds.

    With ``up_to_iso`` one canonical representative per isomorphism class
    is produced, otherwise every labeled frame.  ``cap`` bounds the number
    of frames produced; exceeding it raises :class:`ResourceLimitError`.
    """
    if isinstance(c, str):
        c = FrameClass.parse(c)
    if n < 1:
        raise ValueError("n must be at least 1")
    if up_to_iso and n > MAX_CANONICAL_SIZE:
        raise ResourceLimitError(f"isomorphism reduction limited to {MAX_CANONICAL_SIZE} worlds")
    test = _CLASS_TESTS[c]
    emitted = 0
    for f in _source(c, n, up_to_iso):
        if test(f):
            emitted += 1
            if cap is not None and emitted > cap:
                raise ResourceLimitError(f"more than {cap} frames of class {c.value} on {n} worlds")
            yield f


def count_frames(c: FrameClass | str, n: int, up_to_iso: bool = True) -> int:
    return sum(1 for _ in enumerate_frames(c, n, up_to_iso))


# --------------------------------------------------------------------------
# drawing helpers

def hasse_edges(f: Frame) -> list[tuple[int, int]]:
    """Non-loop edges after transitive reduction.

    For transitive frames only covering pairs of the strict part survive,
    plus the mutual edges inside clusters; other frames are drawn as is.
    """
    if not is_transitive(f):
        return [(i, j) for i, j in f.edges() if i != j]
    out = []
    for i, j in f.edges():
        if i == j:
            continue
        if f.related(j, i):
            out.append((i, j))
            continue
        between = any(
            k not in (i, j) and f.related(i, k) and f.related(k, j)
            and not f.related(k, i) and not f.related(j, k)
            for k in f.worlds
        )
        if not between:
            out.append((i, j))
    return out


def covers(f: Frame) -> list[list[int]]:
    """Upper covers of each world in a poset."""
    out = [[] for _ in f.worlds]
    for i, j in hasse_edges(f):
        out[i].append(j)
    return out
