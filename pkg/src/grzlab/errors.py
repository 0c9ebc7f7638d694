"""Exceptions and the small check-result type shared across modules."""

from __future__ import annotations

from dataclasses import dataclass


class GrzLabError(Exception):
    pass


class ParseError(GrzLabError, ValueError):
    """Syntax error in formula text.

    ``offset`` is a byte offset into the UTF-8 encoding of the input and
    ``expected`` is the set of token descriptions that would have been
    accepted there.
    """

    def __init__(self, message, offset=0, expected=frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        if self.expected:
            message = f"{message} at byte {offset}; expected one of: {', '.join(sorted(self.expected))}"
        else:
            message = f"{message} at byte {offset}"
        super().__init__(message)


class ArityError(GrzLabError, ValueError):
    pass


class PreconditionError(GrzLabError, ValueError):
    """An input does not meet an operation's structural requirement."""


class ResourceLimitError(GrzLabError):
    """A configured cap on work (valuations, frames, patterns) was exceeded."""


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True)
class Check:
    """Outcome of a certificate check; truthy iff it passed."""

    ok: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self):
        return self.ok

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    @classmethod
    def from_violations(cls, violations):
        violations = tuple(violations)
        return cls(not violations, violations)
