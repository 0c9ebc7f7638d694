"""Kripke models, the model checker, and frame/class validity sweeps.

Two evaluators share the same semantics: :func:`extension` labels
subformulas with world bitsets for a single model, while the sweep used by
:func:`frame_valid` labels subformulas with boolean ``(valuations, worlds)``
arrays so that a whole block of valuations is checked at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import ResourceLimitError
from .formula import (And, Box, Const, Dia, Formula, Iff, Imp, Not, Or, Var, as_formula,
                      sorted_variables)
from .frame import Frame, FrameClass, _bits, enumerate_frames

DEFAULT_VALUATION_CAP = 1 << 24
_BLOCK = 1 << 14


@dataclass(frozen=True, eq=False)
class Model:
    frame: Frame
    valuation: Mapping[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        val = {}
        for name, worlds in self.valuation.items():
            worlds = frozenset(int(w) for w in worlds)
            if any(not 0 <= w < self.frame.size for w in worlds):
                raise ValueError(f"valuation of {name!r} mentions a world outside the frame")
            val[name] = worlds
        object.__setattr__(self, "valuation", val)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return self.frame == other.frame and self._nonempty() == other._nonempty()

    def _nonempty(self):
        return {k: v for k, v in self.valuation.items() if v}

    def __hash__(self):
        return hash((self.frame, frozenset(self._nonempty().items())))

    @property
    def size(self) -> int:
        return self.frame.size

    def variables(self) -> list[str]:
        return sorted(self.valuation)

    def bits(self, name: str) -> int:
        mask = 0
        for w in self.valuation.get(name, ()):
            mask |= 1 << w
        return mask

    def true_at(self, w: int) -> list[str]:
        return sorted(k for k, v in self.valuation.items() if w in v)

    def with_valuation(self, valuation) -> Model:
        return Model(self.frame, valuation)

    def to_dict(self) -> dict:
        d = self.frame.to_dict()
        d["valuation"] = {k: sorted(v) for k, v in sorted(self.valuation.items())}
        return d

    @classmethod
    def from_dict(cls, data: dict) -> Model:
        return cls(Frame.from_dict(data), {k: frozenset(v) for k, v in
                                           (data.get("valuation") or {}).items()})

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class PointedModel:
    model: Model
    point: int = 0

    def __post_init__(self):
        if not 0 <= self.point < self.model.size:
            raise ValueError(f"point {self.point} outside model of size {self.model.size}")

    @property
    def frame(self) -> Frame:
        return self.model.frame

    def to_dict(self) -> dict:
        d = self.model.to_dict()
        d["designated"] = self.point
        return d

    @classmethod
    def from_dict(cls, data: dict) -> PointedModel:
        return cls(Model.from_dict(data), int(data.get("designated", 0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def load_model(data: dict) -> PointedModel:
    return PointedModel.from_dict(data)


# --------------------------------------------------------------------------
# single-model checking

def extension_bits(model: Model, f: Formula | str) -> int:
    """Bitset of worlds where ``f`` holds; unmapped variables are false everywhere."""
    f = as_formula(f)
    frame = model.frame
    n = frame.size
    full = (1 << n) - 1
    rows = frame.rows
    memo: dict[Formula, int] = {}

    def box(ext):
        out = 0
        for w in range(n):
            if rows[w] & ~ext == 0:
                out |= 1 << w
        return out

    def dia(ext):
        out = 0
        for w in range(n):
            if rows[w] & ext:
                out |= 1 << w
        return out

    def ev(g):
        got = memo.get(g)
        if got is not None:
            return got
        if isinstance(g, Var):
            r = model.bits(g.name)
        elif isinstance(g, Const):
            r = full if g.value else 0
        elif isinstance(g, Not):
            r = full & ~ev(g.sub)
        elif isinstance(g, Box):
            r = box(ev(g.sub))
        elif isinstance(g, Dia):
            r = dia(ev(g.sub))
        elif isinstance(g, And):
            r = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            r = ev(g.left) | ev(g.right)
        elif isinstance(g, Imp):
            r = (full & ~ev(g.left)) | ev(g.right)
        elif isinstance(g, Iff):
            r = full & ~(ev(g.left) ^ ev(g.right))
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return ev(f)


def extension(model: Model, f: Formula | str) -> frozenset[int]:
    return frozenset(_bits(extension_bits(model, f)))


def satisfies(pm: PointedModel, f: Formula | str) -> bool:
    return bool(extension_bits(pm.model, f) >> pm.point & 1)


def holds_everywhere(model: Model, f: Formula | str) -> bool:
    return extension_bits(model, f) == (1 << model.size) - 1


# --------------------------------------------------------------------------
# batched checking over many valuations

def batch_extension(frame: Frame, f: Formula, atoms: Mapping[str, np.ndarray]) -> np.ndarray:
    """Evaluate ``f`` for a batch of valuations.

    ``atoms[name]`` is a boolean ``(batch, worlds)`` array; the result has
    the same shape.
    """
    n = frame.size
    rel_t = np.array([[frame.related(w, v) for w in range(n)] for v in range(n)], dtype=bool)
    batch = next(iter(atoms.values())).shape[0] if atoms else 1
    memo: dict[Formula, np.ndarray] = {}

    def ev(g):
        got = memo.get(g)
        if got is not None:
            return got
        if isinstance(g, Var):
            r = atoms.get(g.name)
            if r is None:
                r = np.zeros((batch, n), dtype=bool)
        elif isinstance(g, Const):
            r = np.full((batch, n), g.value, dtype=bool)
        elif isinstance(g, Not):
            r = ~ev(g.sub)
        elif isinstance(g, Box):
            # w fails []g iff some successor falsifies g
            r = ~((~ev(g.sub)) @ rel_t)
        elif isinstance(g, Dia):
            r = ev(g.sub) @ rel_t
        elif isinstance(g, And):
            r = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            r = ev(g.left) | ev(g.right)
        elif isinstance(g, Imp):
            r = ~ev(g.left) | ev(g.right)
        elif isinstance(g, Iff):
            r = ev(g.left) == ev(g.right)
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return ev(f)


def _decode_block(names, n, start, stop):
    """Atom arrays for valuation indices ``start .. stop-1``.

    Valuation index ``i`` makes variable ``k`` true at world ``w`` iff bit
    ``k*n + w`` of ``i`` is set.
    """
    idx = np.arange(start, stop, dtype=np.uint64)
    worlds = np.arange(n, dtype=np.uint64)
    atoms = {}
    for k, name in enumerate(names):
        shift = worlds + np.uint64(k * n)
        atoms[name] = ((idx[:, None] >> shift[None, :]) & np.uint64(1)).astype(bool)
    return atoms


def valuation_from_index(names, n, index) -> dict[str, frozenset[int]]:
    return {name: frozenset(w for w in range(n) if index >> (k * n + w) & 1)
            for k, name in enumerate(names)}


@dataclass(frozen=True)
class Validity:
    """Result of a frame validity check; truthy iff valid."""

    valid: bool
    countermodel: Model | None = None
    world: int | None = None

    def __bool__(self):
        return self.valid

    @property
    def witness(self) -> PointedModel | None:
        if self.countermodel is None:
            return None
        return PointedModel(self.countermodel, self.world)


def frame_valid(frame: Frame, f: Formula | str, cap: int = DEFAULT_VALUATION_CAP) -> Validity:
    """Check ``f`` at every world under every valuation of its variables.

    Valuations are tried in index order (see :func:`valuation_from_index`)
    and the first failing valuation with its lowest failing world is
    returned, so the witness is deterministic.
    """
    f = as_formula(f)
    names = sorted_variables(f)
    n = frame.size
    total = 1 << (len(names) * n)
    if total > cap:
        raise ResourceLimitError(f"{total} valuations exceed the cap of {cap}")
    for start in range(0, total, _BLOCK):
        stop = min(total, start + _BLOCK)
        ext = batch_extension(frame, f, _decode_block(names, n, start, stop))
        bad = ~ext.all(axis=1)
        if bad.any():
            row = int(np.argmax(bad))
            world = int(np.argmax(~ext[row]))
            model = Model(frame, valuation_from_index(names, n, start + row))
            return Validity(False, model, world)
    return Validity(True)


@dataclass
class SearchReport:
    """Outcome of a bounded sweep for a countermodel."""

    found: bool
    countermodel: Model | None = None
    world: int | None = None
    frames_examined: int = 0
    bound: int = 0
    frame_class: FrameClass | None = None
    logic: str | None = None

    @property
    def witness(self) -> PointedModel | None:
        if self.countermodel is None:
            return None
        return PointedModel(self.countermodel, self.world)

    def to_dict(self) -> dict:
        d = {
            "outcome": "countermodel" if self.found else "exhausted",
            "frames_examined": self.frames_examined,
            "bound": self.bound,
            "class": self.frame_class.value if self.frame_class else None,
        }
        if self.logic is not None:
            d["logic"] = self.logic
        if self.found:
            d["witness"] = self.witness.to_dict()
        return d


def class_valid_upto(c: FrameClass | str, f: Formula | str, nmax: int,
                     cap: int = DEFAULT_VALUATION_CAP, frame_cap: int | None = None,
                     sizes: Iterable[int] | None = None) -> SearchReport:
    """Sweep ``frame_valid`` over ``enumerate_frames(c, n)`` for ``n = 1..nmax``.

    The first countermodel in enumeration order is reported.
    """
    if isinstance(c, str):
        c = FrameClass.parse(c)
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    f = as_formula(f)
    examined = 0
    for n in (sizes if sizes is not None else range(1, nmax + 1)):
        for frame in enumerate_frames(c, n, up_to_iso=True, cap=frame_cap):
            examined += 1
            result = frame_valid(frame, f, cap=cap)
            if not result:
                return SearchReport(True, result.countermodel, result.world, examined, nmax, c)
    return SearchReport(False, None, None, examined, nmax, c)
