# coding: utf-8
"""Paths through schemas: validation, continuation letters, enumeration, projection.

A PathCursor is the continuation of a partially executed schema: a stack of
statements still to run, with a While node standing for "test the loop
predicate again". At every cursor the set of legal next letters is empty,
one label, one assignment letter, or the two letters of one predicate; this
is what makes paths through a schema deterministic apart from branch choice.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterator, NamedTuple, Optional, Sequence, Tuple

from src.core.errors import InvalidPathError, NotAQuotientError
from src.schema.model import (
    Assign,
    If,
    Label,
    Letter,
    Path,
    PredLetter,
    Schema,
    Seq,
    Skip,
    While,
    is_quotient,
    letter_of,
    symbols,
)


def _normalize(pending: Tuple[Schema, ...]) -> Tuple[Schema, ...]:
    """Pop Skip and expand Seq until the head is a statement (or nothing)."""
    while pending:
        head = pending[0]
        if isinstance(head, Skip):
            pending = pending[1:]
        elif isinstance(head, Seq):
            pending = head.items + pending[1:]
        else:
            break
    return pending


@dataclass(frozen=True)
class PathCursor:
    """Immutable position inside a schema.

    Attributes:
        pending: Statements still to execute, head first.
        consumed: Number of letters consumed so far.
    """

    pending: Tuple[Schema, ...]
    consumed: int = 0

    @classmethod
    def start(cls, schema: Schema) -> "PathCursor":
        return cls(_normalize((schema,)))

    @property
    def terminal(self) -> bool:
        return not self.pending

    def next_letters(self) -> Tuple[Letter, ...]:
        """Return the legal next letters, true branch before false branch."""
        if not self.pending:
            return ()
        head = self.pending[0]
        if isinstance(head, (Label, Assign)):
            return (letter_of(head),)
        assert isinstance(head, (If, While))
        return (
            PredLetter(head.predicate, head.args, True),
            PredLetter(head.predicate, head.args, False),
        )

    def advance(self, letter: Letter) -> "PathCursor":
        """Consume ``letter``.

        Raises:
            InvalidPathError: If ``letter`` is not a legal next letter.
        """
        if self.pending:
            head, rest = self.pending[0], self.pending[1:]
            if isinstance(head, (Label, Assign)):
                if letter == letter_of(head):
                    return PathCursor(_normalize(rest), self.consumed + 1)
            elif (
                isinstance(letter, PredLetter)
                and letter.predicate == head.predicate  # type: ignore[union-attr]
                and letter.args == head.args  # type: ignore[union-attr]
            ):
                if isinstance(head, If):
                    branch = head.then_part if letter.branch else head.else_part
                    return PathCursor(_normalize((branch,) + rest), self.consumed + 1)
                if isinstance(head, While):
                    if letter.branch:
                        return PathCursor(_normalize((head.body, head) + rest), self.consumed + 1)
                    return PathCursor(_normalize(rest), self.consumed + 1)
        expected = " | ".join(l.token for l in self.next_letters()) or "end of path"
        raise InvalidPathError(
            f"letter {self.consumed + 1} ({letter.token}) is not a legal continuation; expected {expected}",
            self.consumed + 1,
        )


def walk(schema: Schema, path: Sequence[Letter]) -> PathCursor:
    """Run ``path`` through ``schema`` and return the final cursor.

    Raises:
        InvalidPathError: At the first letter that is not a legal continuation.
    """
    cursor = PathCursor.start(schema)
    for letter in path:
        cursor = cursor.advance(letter)
    return cursor


class PathKind(Enum):
    """Classification of a letter sequence against pathset(S)."""

    PREFIX = "valid-prefix"
    TERMINAL = "terminal"
    INVALID = "invalid"


class PathStatus(NamedTuple):
    """Result of validate_path.

    Attributes:
        kind: Classification.
        position: 1-based index of the first offending letter when invalid.
    """

    kind: PathKind
    position: Optional[int] = None

    @property
    def valid(self) -> bool:
        return self.kind is not PathKind.INVALID


def validate_path(schema: Schema, path: Sequence[Letter]) -> PathStatus:
    """Classify ``path`` as a strict prefix of a terminating path, terminal, or invalid."""
    try:
        cursor = walk(schema, path)
    except InvalidPathError as e:
        return PathStatus(PathKind.INVALID, e.position)
    return PathStatus(PathKind.TERMINAL if cursor.terminal else PathKind.PREFIX)


def next_letters(schema: Schema, prefix: Sequence[Letter]) -> FrozenSet[Letter]:
    """Return the letters that extend ``prefix`` to a longer path.

    Raises:
        InvalidPathError: If ``prefix`` is not a path through ``schema``.
    """
    return frozenset(walk(schema, prefix).next_letters())


class EnumeratedPath(NamedTuple):
    """A path produced by enumerate_paths."""

    path: Path
    terminal: bool


def enumerate_paths(schema: Schema, max_len: int) -> Iterator[EnumeratedPath]:
    """Yield every path of length at most ``max_len``.

    Paths come in length order; within one length, in the order their
    prefixes were reached with the true branch explored before the false one.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    queue = deque([((), PathCursor.start(schema))])
    while queue:
        path, cursor = queue.popleft()
        yield EnumeratedPath(path, cursor.terminal)
        if len(path) == max_len:
            continue
        for letter in cursor.next_letters():
            queue.append((path + (letter,), cursor.advance(letter)))


def project(quotient: Schema, path: Sequence[Letter], original: Optional[Schema] = None) -> Path:
    """Delete from ``path`` every letter whose symbol is absent from ``quotient``.

    Args:
        quotient: Quotient the path is projected onto.
        path: Path through the original schema.
        original: When given, checked to have ``quotient`` as a quotient.

    Raises:
        NotAQuotientError: If ``original`` is given and ``quotient`` is not its quotient.
    """
    if original is not None and not is_quotient(quotient, original):
        raise NotAQuotientError("projection target is not a quotient of the schema")
    kept = symbols(quotient)
    return tuple(letter for letter in path if letter.symbol in kept)


def count_letters(path: Sequence[Letter], symbol: str) -> int:
    return sum(1 for letter in path if letter.symbol == symbol)
