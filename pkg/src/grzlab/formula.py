"""Modal formulas: syntax trees, parser, printer, substitution, schemata.

Concrete syntax (ASCII)::

    formula := iff
    iff     := imp ("<->" imp)*          left associative
    imp     := or ("->" imp)?            right associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "[]" unary | "<>" unary | atom
    atom    := "true" | "false" | ident | "(" formula ")" | macro "(" formula ")"
    macro   := "penultimate" | "wpenultimate" | "contingent"

Macros are expanded while parsing, so trees never contain macro nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .errors import ArityError, ParseError


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def implies(self, other):
        return Imp(self, other)


@dataclass(frozen=True, repr=False)
class Var(Formula):
    name: str

    def __post_init__(self):
        if not _IDENT_RE.fullmatch(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid variable name {self.name!r}")

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self):
        return "TOP" if self.value else "BOT"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    sub: Formula

    def __repr__(self):
        return f"Not({self.sub!r})"


@dataclass(frozen=True, repr=False)
class Box(Formula):
    sub: Formula

    def __repr__(self):
        return f"Box({self.sub!r})"


@dataclass(frozen=True, repr=False)
class Dia(Formula):
    sub: Formula

    def __repr__(self):
        return f"Dia({self.sub!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Imp(_Binary):
    pass


class Iff(_Binary):
    pass


TOP = Const(True)
BOT = Const(False)

MACROS = ("penultimate", "wpenultimate", "contingent")
KEYWORDS = frozenset(("true", "false") + MACROS)
_IDENT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")

UNARY = (Not, Box, Dia)
BINARY = (And, Or, Imp, Iff)


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    items = list(items)
    return reduce(And, items) if items else TOP


def disj(items: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    items = list(items)
    return reduce(Or, items) if items else BOT


def variables(f: Formula) -> frozenset[str]:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, UNARY):
            stack.append(g.sub)
        elif isinstance(g, _Binary):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def sorted_variables(f: Formula) -> list[str]:
    return sorted(variables(f))


def depth(f: Formula) -> int:
    if isinstance(f, (Var, Const)):
        return 0
    if isinstance(f, UNARY):
        return 1 + depth(f.sub)
    return 1 + max(depth(f.left), depth(f.right))


def size(f: Formula) -> int:
    if isinstance(f, (Var, Const)):
        return 1
    if isinstance(f, UNARY):
        return 1 + size(f.sub)
    return 1 + size(f.left) + size(f.right)


# --------------------------------------------------------------------------
# printing

_PREC = {Iff: 1, Imp: 2, Or: 3, And: 4}
_BIN_SYM = {Iff: "<->", Imp: "->", Or: "|", And: "&"}
_UN_SYM = {Not: "~", Box: "[]", Dia: "<>"}
_UNARY_PREC = 5


def _prec(f):
    return _PREC.get(type(f), _UNARY_PREC + 1 if isinstance(f, (Var, Const)) else _UNARY_PREC)


def to_text(f: Formula) -> str:
    """Render ``f`` with the fewest parentheses that re-parse to ``f``."""
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, UNARY):
        inner = to_text(f.sub)
        if _prec(f.sub) < _UNARY_PREC:
            inner = f"({inner})"
        return _UN_SYM[type(f)] + inner
    p = _PREC[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if isinstance(f, Imp):
        # right associative
        if lp <= p:
            left = f"({left})"
        if rp < p:
            right = f"({right})"
    else:
        if lp < p:
            left = f"({left})"
        if rp <= p:
            right = f"({right})"
    return f"{left} {_BIN_SYM[type(f)]} {right}"


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(<->|->|\[\]|<>|[~&|()])|([a-zA-Z_][a-zA-Z0-9_]*)|(\S))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []  # (kind, value, char offset)
        pos = 0
        while True:
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                break
            sym, word, junk = m.groups()
            start = m.start(m.lastindex)
            if junk is not None:
                # left for the grammar to reject, so the error carries an expected set
                self.tokens.append(("junk", junk, start))
                break
            if word is not None and not _IDENT_RE.fullmatch(word):
                raise ParseError(f"invalid identifier {word!r}", self._byte(start),
                                 {"identifier [a-z][a-zA-Z0-9_]*"})
            self.tokens.append(("sym", sym, start) if sym else ("word", word, start))
            pos = m.end()
        self.tokens.append(("eof", None, len(text)))
        self.i = 0

    def _byte(self, char_offset):
        return len(self.text[:char_offset].encode("utf-8"))

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected, tok=None):
        kind, value, off = tok or self.peek()
        what = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"unexpected {what}", self._byte(off), expected)

    def accept(self, sym):
        kind, value, _ = self.peek()
        if kind == "sym" and value == sym:
            self.i += 1
            return True
        return False

    def expect(self, sym):
        if not self.accept(sym):
            self.fail({repr(sym)})

    def parse(self):
        f = self.iff()
        if self.peek()[0] != "eof":
            self.fail({"'<->'", "'->'", "'|'", "'&'", "end of input"})
        return f

    def iff(self):
        f = self.imp()
        while self.accept("<->"):
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.or_()
        if self.accept("->"):
            return Imp(f, self.imp())
        return f

    def or_(self):
        f = self.and_()
        while self.accept("|"):
            f = Or(f, self.and_())
        return f

    def and_(self):
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("[]"):
            return Box(self.unary())
        if self.accept("<>"):
            return Dia(self.unary())
        return self.atom()

    _ATOM_START = frozenset({"'~'", "'[]'", "'<>'", "'('", "'true'", "'false'", "identifier", "macro"})

    def atom(self):
        tok = self.next()
        kind, value, off = tok
        if kind == "sym" and value == "(":
            f = self.iff()
            self.expect(")")
            return f
        if kind == "word":
            if value == "true":
                return TOP
            if value == "false":
                return BOT
            nxt = self.peek()
            if nxt[0] == "sym" and nxt[1] == "(":
                if value not in MACROS:
                    raise ParseError(f"unknown macro {value!r}", self._byte(off),
                                     {repr(m) for m in MACROS})
                self.next()
                arg = self.iff()
                self.expect(")")
                return build_macro(value, arg)
            if value in MACROS:
                self.fail({"'('"})
            return Var(value)
        self.fail(self._ATOM_START, tok)


def parse(text: str | bytes) -> Formula:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text).parse()


def as_formula(f: Formula | str) -> Formula:
    return parse(f) if isinstance(f, str) else f


# --------------------------------------------------------------------------
# substitution

def substitute(f: Formula, s: Mapping[str, Formula]) -> Formula:
    """Simultaneous uniform substitution."""
    if not s:
        return f
    if isinstance(f, Var):
        return s.get(f.name, f)
    if isinstance(f, Const):
        return f
    if isinstance(f, UNARY):
        return type(f)(substitute(f.sub, s))
    return type(f)(substitute(f.left, s), substitute(f.right, s))


# --------------------------------------------------------------------------
# macros and named schemata

def penultimate(a: Formula) -> Formula:
    na = Not(a)
    return And(And(a, Dia(na)), Box(Imp(na, Box(na))))


def weak_penultimate(a: Formula) -> Formula:
    na = Not(a)
    return And(a, Box(Imp(na, Box(na))))


def contingent(a: Formula) -> Formula:
    return And(Dia(a), Dia(Not(a)))


_MACRO_BUILDERS = {
    "penultimate": penultimate,
    "weak_penultimate": weak_penultimate,
    "wpenultimate": weak_penultimate,
    "contingent": contingent,
}


def build_macro(name: str, arg: Formula) -> Formula:
    try:
        return _MACRO_BUILDERS[name](arg)
    except KeyError:
        raise ValueError(f"unknown macro {name!r}") from None


def _grz(p):
    return Imp(Box(Imp(Box(Imp(p, Box(p))), p)), p)


def _grz_star(p):
    return Imp(contingent(p), Dia(Or(penultimate(p), penultimate(Not(p)))))


def _technical_lemma(p):
    dp_p = Imp(Dia(p), p)
    return Imp(Box(Imp(dp_p, Box(dp_p))), Or(Box(Imp(p, Box(p))), Dia(penultimate(p))))


SCHEMATA = {
    "K": (2, lambda p, q: Imp(Box(Imp(p, q)), Imp(Box(p), Box(q)))),
    "T": (1, lambda p: Imp(Box(p), p)),
    "4": (1, lambda p: Imp(Box(p), Box(Box(p)))),
    ".2": (1, lambda p: Imp(Dia(Box(p)), Box(Dia(p)))),
    ".3": (2, lambda p, q: Or(Box(Imp(Box(p), q)), Box(Imp(Box(q), p)))),
    "Grz": (1, _grz),
    "Grz*": (1, _grz_star),
    "Alt1": (1, lambda p: Or(Box(p), Box(Not(p)))),
    "GrzDisjunctive": (1, lambda p: Or(p, Dia(And(Not(p), Box(Imp(p, Box(p))))))),
    "GrzConcise": (1, lambda p: Or(p, Dia(weak_penultimate(Not(p))))),
    "TechnicalLemma": (1, _technical_lemma),
    "K4Step": (2, lambda a, b: Imp(Dia(Or(a, Dia(b))), Dia(Or(a, b)))),
}

_SCHEMA_ALIASES = {name.lower(): name for name in SCHEMATA}
_SCHEMA_ALIASES.update({"grzstar": "Grz*", "alt_1": "Alt1", "2": ".2", "3": ".3"})

DEFAULT_ARGS = {1: ("p",), 2: ("p", "q")}


def schema_name(name: str) -> str:
    try:
        return _SCHEMA_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown schema {name!r}; known: {', '.join(SCHEMATA)}") from None


def build_axiom(schema: str, args: Sequence[Formula] | None = None) -> Formula:
    """Instantiate a named schema; ``args=None`` uses ``p`` (and ``q``)."""
    name = schema_name(schema)
    arity, builder = SCHEMATA[name]
    if args is None:
        args = [Var(v) for v in DEFAULT_ARGS[arity]]
    if len(args) != arity:
        raise ArityError(f"schema {name} takes {arity} argument(s), got {len(args)}")
    return builder(*args)


def theta(buttons: Sequence[Formula], pattern: Iterable[int]) -> Formula:
    """Exact button pattern: the buttons indexed by ``pattern`` are pushed, no others."""
    pattern = set(pattern)
    if any(not 0 <= i < len(buttons) for i in pattern):
        raise IndexError(f"pattern {sorted(pattern)} out of range for {len(buttons)} buttons")
    pushed = [Box(b) for i, b in enumerate(buttons) if i in pattern]
    unpushed = [Not(Box(b)) for i, b in enumerate(buttons) if i not in pattern]
    return conj(pushed + unpushed)


def jankov_fine_var(i: int) -> Var:
    return Var(f"w{i}")


def jankov_fine_parts(frame, w0: int) -> dict[int, Formula]:
    """The Jankov-Fine formula split along the three labeling conditions.

    Key 1 is the initial-node atom, key 3 the boxed exactly-one clause and
    key 2 the boxed accessibility clauses; their conjunction is equivalent
    to :func:`jankov_fine`.
    """
    n = frame.size
    if not 0 <= w0 < n:
        raise IndexError(f"world {w0} not in frame of size {n}")
    p = [jankov_fine_var(i) for i in range(n)]
    exclusive = [Imp(p[w], Not(p[v])) for w in range(n) for v in range(n) if w != v]
    reach = [Imp(p[w], Dia(p[v])) for w in range(n) for v in range(n) if frame.related(w, v)]
    unreach = [Imp(p[w], Not(Dia(p[v]))) for w in range(n) for v in range(n)
               if not frame.related(w, v)]
    return {
        1: p[w0],
        3: Box(conj([disj(p)] + exclusive)),
        2: Box(conj(reach + unreach)),
    }


def jankov_fine(frame, w0: int) -> Formula:
    """Jankov-Fine formula of a finite frame at ``w0``, node ``i`` named ``w<i>``."""
    n = frame.size
    if not 0 <= w0 < n:
        raise IndexError(f"world {w0} not in frame of size {n}")
    p = [jankov_fine_var(i) for i in range(n)]
    clauses = [disj(p)]
    clauses += [Imp(p[w], Not(p[v])) for w in range(n) for v in range(n) if w != v]
    clauses += [Imp(p[w], Dia(p[v])) for w in range(n) for v in range(n) if frame.related(w, v)]
    clauses += [Imp(p[w], Not(Dia(p[v]))) for w in range(n) for v in range(n)
                if not frame.related(w, v)]
    return And(p[w0], Box(conj(clauses)))


def random_formula(rng, names: Sequence[str], max_depth: int) -> Formula:
    """Draw a random tree of depth at most ``max_depth`` using ``rng`` (a ``random.Random``)."""
    if max_depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.1:
            return TOP if rng.random() < 0.5 else BOT
        return Var(rng.choice(names))
    kind = rng.choice((Not, Box, Dia, And, Or, Imp, Iff, Box, Dia))
    if kind in UNARY:
        return kind(random_formula(rng, names, max_depth - 1))
    return kind(random_formula(rng, names, max_depth - 1),
                random_formula(rng, names, max_depth - 1))
