# coding: utf-8
"""Simple l-reductions of paths and the polynomial reducibility test.

A simple l-reduction rewrites one segment of a path through a linear schema:

- ``while``: ``<p,T> s <p,F>`` becomes ``<p,F>`` when ``s`` is a complete
  traversal of the loop body (the last iteration is dropped);
- ``if``: ``<p,Z> s`` becomes ``<p,not Z>`` when the ``not Z`` part is skip
  and ``s`` is a complete traversal of the ``Z`` part.

Neither rewrite may delete an occurrence of the label l, so the body or the
if statement must not contain l. Reductions never lengthen a path, and the
result is again a path through the schema, terminal iff the input was.

Reducibility of ``source`` to ``target`` is decided by aligning the two
left to right. Equal letters advance both sides. At the first mismatch the
only reductions that can help are fixed by the target letter: for a loop
exit against a loop entry, every remaining iteration of that loop execution
is dropped (last iteration first); for a swapped if branch, the taken part
is dropped. Anything else cannot be repaired, since reductions act on
segments that start at a predicate letter and keep everything before it.

Thread Safety:
    All functions are pure. Aligner values are immutable and may be shared
    between branches of a depth-first search.

See Also:
    - src/paths/cursor.py: path validation
    - src/slicing/checkers.py: the dynamic slice checker drives the Aligner
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from src.core.errors import SchliceError
from src.paths.cursor import walk
from src.schema.model import (
    SKIP,
    If,
    Letter,
    Path,
    PredLetter,
    Schema,
    Skip,
    While,
    contains_label,
    iter_statements,
    symbols,
)

_logger = logging.getLogger(__name__)

WHILE = "while"
IF = "if"


class Reduction(NamedTuple):
    """One simple reduction step.

    Attributes:
        position: 0-based index in the path the step is applied to.
        kind: ``"while"`` or ``"if"``.
        removed: Letters deleted starting at ``position``.
        replacement: Letters inserted in their place (the flipped letter for ``if``).
    """

    position: int
    kind: str
    removed: Path
    replacement: Path = ()

    def format(self) -> str:
        """Serialise as ``position kind removed-tokens``."""
        return f"{self.position} {self.kind} {' '.join(letter.token for letter in self.removed)}"


def apply_reduction(path: Sequence[Letter], step: Reduction) -> Path:
    """Apply ``step`` to ``path``.

    Raises:
        SchliceError: If ``path`` does not hold ``step.removed`` at ``step.position``.
    """
    end = step.position + len(step.removed)
    if tuple(path[step.position:end]) != step.removed:
        raise SchliceError(f"reduction does not apply at position {step.position}")
    return tuple(path[: step.position]) + step.replacement + tuple(path[end:])


class ReducedPath(NamedTuple):
    """A result of simple_l_reductions."""

    path: Path
    position: int
    kind: str


@dataclass(frozen=True)
class _Predicate:
    kind: str
    # Symbols of the loop body (while) or of each branch part (if).
    body: FrozenSet[str] = frozenset()
    then_symbols: FrozenSet[str] = frozenset()
    else_symbols: FrozenSet[str] = frozenset()
    then_skip: bool = False
    else_skip: bool = False
    holds_label: bool = False
    then_part: Schema = field(default=SKIP, compare=False)
    else_part: Schema = field(default=SKIP, compare=False)

    def part(self, branch: bool) -> FrozenSet[str]:
        if self.kind == WHILE:
            return self.body
        return self.then_symbols if branch else self.else_symbols

    def part_schema(self, branch: bool) -> Schema:
        return self.then_part if branch else self.else_part

    def part_is_skip(self, branch: bool) -> bool:
        return self.then_skip if branch else self.else_skip


class SchemaIndex:
    """Per-predicate facts about a linear schema needed for reductions.

    Args:
        schema: The schema the paths run through.
        label: Name of the protected label, or None for unlabelled reductions.
    """

    def __init__(self, schema: Schema, label: Optional[str] = None):
        self.schema = schema
        self.label = label
        self._predicates: Dict[str, _Predicate] = {}
        for stmt in iter_statements(schema):
            if isinstance(stmt, While):
                self._predicates[stmt.predicate] = _Predicate(
                    WHILE,
                    body=symbols(stmt.body),
                    holds_label=label is not None and contains_label(stmt.body, label),
                )
            elif isinstance(stmt, If):
                self._predicates[stmt.predicate] = _Predicate(
                    IF,
                    then_symbols=symbols(stmt.then_part),
                    else_symbols=symbols(stmt.else_part),
                    then_skip=isinstance(stmt.then_part, Skip),
                    else_skip=isinstance(stmt.else_part, Skip),
                    holds_label=label is not None and contains_label(stmt, label),
                    then_part=stmt.then_part,
                    else_part=stmt.else_part,
                )

    def predicate(self, name: str) -> _Predicate:
        return self._predicates[name]

    @staticmethod
    def run_end(path: Sequence[Letter], start: int, part: FrozenSet[str]) -> int:
        """Return the end of the maximal run of letters from ``part`` starting at ``start``."""
        end = start
        while end < len(path) and path[end].symbol in part:
            end += 1
        return end

    @staticmethod
    def run_complete(path: Sequence[Letter], start: int, end: int, part: Schema) -> bool:
        """Decide whether ``path[start:end]`` is a terminal path through ``part``.

        In a valid path a part's letters are contiguous, so a run followed by
        another letter has left the part. A run that ends the path is walked
        through the part itself.
        """
        if end < len(path):
            return True
        return walk(part, path[start:end]).terminal


def simple_l_reductions(
    schema: Schema, path: Sequence[Letter], label: Optional[str] = None
) -> List[ReducedPath]:
    """Return every path obtainable from ``path`` by one simple l-reduction.

    Raises:
        InvalidPathError: If ``path`` is not a path through ``schema``.
    """
    walk(schema, path)
    return list(_reductions(SchemaIndex(schema, label), tuple(path)))


def _reductions(index: SchemaIndex, path: Path) -> Iterator[ReducedPath]:
    for position, letter in enumerate(path):
        if not isinstance(letter, PredLetter):
            continue
        info = index.predicate(letter.predicate)
        if info.holds_label:
            continue
        part = info.part(letter.branch)
        end = index.run_end(path, position + 1, part)
        if info.kind == WHILE:
            if letter.branch and end < len(path) and path[end] == letter.flipped():
                yield ReducedPath(path[:position] + path[end:], position, WHILE)
        elif info.part_is_skip(not letter.branch) and index.run_complete(
            path, position + 1, end, info.part_schema(letter.branch)
        ):
            yield ReducedPath(path[:position] + (letter.flipped(),) + path[end:], position, IF)


@dataclass(frozen=True)
class Aligner:
    """Incremental alignment of a target prefix against a fixed source path.

    ``consumed`` letters of the source have been reduced to the target letters
    fed so far; ``steps`` records the reductions performed, in an order in
    which they can be applied to the source one after another.
    """

    index: SchemaIndex
    source: Path
    consumed: int = 0
    fed: int = 0
    steps: Tuple[Reduction, ...] = ()

    @classmethod
    def start(cls, schema: Schema, source: Sequence[Letter], label: Optional[str] = None) -> "Aligner":
        return cls(SchemaIndex(schema, label), tuple(source))

    @property
    def complete(self) -> bool:
        """True when the whole source has been aligned."""
        return self.consumed == len(self.source)

    def feed(self, letter: Letter) -> Optional["Aligner"]:
        """Align one more target letter; None if no reduction of the source can match."""
        source, i = self.source, self.consumed
        if i >= len(source):
            return None
        if source[i] == letter:
            return Aligner(self.index, source, i + 1, self.fed + 1, self.steps)
        current = source[i]
        if not (
            isinstance(letter, PredLetter)
            and isinstance(current, PredLetter)
            and current.predicate == letter.predicate
            and current.branch != letter.branch
        ):
            return None
        info = self.index.predicate(letter.predicate)
        if info.holds_label:
            return None
        if info.kind == WHILE:
            return self._drop_iterations(current, info)
        return self._swap_branch(current, info)

    def _drop_iterations(self, entry: PredLetter, info: _Predicate) -> Optional["Aligner"]:
        if not entry.branch:
            return None
        source, k = self.source, self.consumed
        starts: List[Tuple[int, int]] = []
        while k < len(source) and source[k] == entry:
            end = self.index.run_end(source, k + 1, info.body)
            starts.append((k, end))
            k = end
        if k >= len(source) or source[k] != entry.flipped():
            return None
        offset = self.fed - self.consumed
        new_steps = tuple(
            Reduction(start + offset, WHILE, source[start:end]) for start, end in reversed(starts)
        )
        return Aligner(self.index, source, k + 1, self.fed + 1, self.steps + new_steps)

    def _swap_branch(self, taken: PredLetter, info: _Predicate) -> Optional["Aligner"]:
        if not info.part_is_skip(not taken.branch):
            return None
        source, i = self.source, self.consumed
        part = info.part(taken.branch)
        end = self.index.run_end(source, i + 1, part)
        if not self.index.run_complete(source, i + 1, end, info.part_schema(taken.branch)):
            return None
        step = Reduction(self.fed, IF, source[i:end], (taken.flipped(),))
        return Aligner(self.index, source, end, self.fed + 1, self.steps + (step,))


class ReductionResult(NamedTuple):
    """Outcome of is_l_reducible.

    Attributes:
        ok: True if the source reduces to the target.
        steps: Witness reductions, applicable to the source in order.
        failed_at: 0-based target index where alignment failed, when not ok.
    """

    ok: bool
    steps: Tuple[Reduction, ...] = ()
    failed_at: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def _align(
    schema: Schema, source: Sequence[Letter], target: Sequence[Letter], label: Optional[str]
) -> Tuple[Optional[Aligner], int]:
    aligner: Optional[Aligner] = Aligner.start(schema, source, label)
    for position, letter in enumerate(target):
        assert aligner is not None
        aligner = aligner.feed(letter)
        if aligner is None:
            return None, position
    return aligner, len(target)


def is_l_reducible(
    schema: Schema,
    source: Sequence[Letter],
    target: Sequence[Letter],
    label: Optional[str] = None,
) -> ReductionResult:
    """Decide whether ``source`` reduces to ``target`` by simple l-reductions.

    Raises:
        InvalidPathError: If either path is not a path through ``schema``.
    """
    walk(schema, source)
    walk(schema, target)
    if len(target) > len(source):
        return ReductionResult(False, failed_at=len(source))
    aligner, position = _align(schema, source, target, label)
    if aligner is None:
        return ReductionResult(False, failed_at=position)
    if not aligner.complete:
        return ReductionResult(False, failed_at=len(target))
    return ReductionResult(True, aligner.steps)


def is_prefix_of_reduction(
    schema: Schema,
    source: Sequence[Letter],
    prefix: Sequence[Letter],
    label: Optional[str] = None,
) -> bool:
    """Decide whether ``prefix`` begins some path that ``source`` reduces to.

    Both arguments are assumed to be valid paths through ``schema``.
    """
    aligner, _ = _align(schema, source, prefix, label)
    return aligner is not None


def all_l_reductions(schema: Schema, path: Sequence[Letter], label: Optional[str] = None) -> Set[Path]:
    """Return every path reachable from ``path`` by zero or more simple l-reductions.

    Exhaustive breadth-first closure; the number of results can be
    exponential in the path length.
    """
    walk(schema, path)
    index = SchemaIndex(schema, label)
    start = tuple(path)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for reduced in _reductions(index, current):
            if reduced.path not in seen:
                seen.add(reduced.path)
                queue.append(reduced.path)
    _logger.debug("Reduction closure of a %d-letter path has %d members", len(start), len(seen))
    return seen


__all__ = [
    "Aligner",
    "ReducedPath",
    "Reduction",
    "ReductionResult",
    "SchemaIndex",
    "all_l_reductions",
    "apply_reduction",
    "is_l_reducible",
    "is_prefix_of_reduction",
    "simple_l_reductions",
]
