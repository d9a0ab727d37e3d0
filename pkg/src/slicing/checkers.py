# coding: utf-8
"""Slicing criteria and the two slice checkers.

A criterion fixes a linear schema S, an executable path ``rho`` followed by
the label letter ``l``, and a variable set V. For a quotient S' containing l,
with ``pi`` the projection of ``rho`` onto S':

- S' is a path-faithful dynamic slice (PFDS) when every variable of V ends
  with the same term after ``pi`` as after ``rho``, and every consequence of
  ``pi`` is a consequence of ``rho``. check_pfds decides this in one pass
  over ``pi``; check_pfds_definitional enumerates the maximal paths through
  S' compatible with ``rho`` and is kept as an oracle for it.
- S' is a dynamic slice (DS) when every maximal path through S' compatible
  with ``rho`` has a prefix ``rho' l`` where ``pi`` is l-reducible to
  ``rho'`` and V ends with the same terms. check_ds walks the tree of
  compatible paths depth first, carrying the Herbrand state and the
  reduction alignment along each branch; a branch stops as soon as it has a
  good prefix, and the first branch that cannot get one is the witness.

Paths are "maximal" when terminal or of length ``|pi l|``: no reducible
prefix is longer than ``pi``.

See Also:
    - src/paths/reduction.py: Aligner
    - src/slicing/search.py: lattice search over quotients
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from src.core.errors import InvalidCriterionError, InvalidPathError, NotAQuotientError
from src.herbrand.engine import (
    HerbrandState,
    check_consistent,
    format_consequence,
    path_consequences,
    run_predicate_free,
)
from src.herbrand.terms import DEFAULT_STORE, TermId, TermStore
from src.paths.cursor import PathCursor, project, walk
from src.paths.reduction import Aligner
from src.schema.model import (
    LabelLetter,
    Letter,
    Path,
    PredLetter,
    Schema,
    append_label,
    contains_label,
    is_quotient,
    site_of_symbol,
)
from src.schema.parser import print_path

_logger = logging.getLogger(__name__)

# Witness kinds, as printed in verdict lines.
MISMATCH = "mismatch"
CONSEQUENCE = "consequence"
PATH = "path"

_Key = Tuple[str, Tuple[TermId, ...]]


@dataclass(frozen=True)
class SliceCriterion:
    """A slicing criterion ``(rho l, V)`` on a schema.

    Use :meth:`build` or :meth:`end_slice`; they validate the preconditions.

    Attributes:
        schema: The sliced schema S (contains the label).
        path: The criterion path ``rho`` without the trailing label letter.
        variables: The criterion variables V.
        label: The criterion label l.
        store: Term store shared by every evaluation under this criterion.
    """

    schema: Schema
    path: Path
    variables: Tuple[str, ...]
    label: str
    store: TermStore = field(default=DEFAULT_STORE, compare=False, repr=False)

    @classmethod
    def build(
        cls,
        schema: Schema,
        path: Sequence[Letter],
        variables: Sequence[str],
        label: str,
        store: Optional[TermStore] = None,
    ) -> "SliceCriterion":
        """Validate and build a criterion.

        ``path`` may be given with or without the trailing label letter.
        Without ``store`` the criterion interns into the process-wide
        DEFAULT_STORE; pass a fresh TermStore to keep a run's terms private.

        Raises:
            InvalidCriterionError: If the label is missing from ``schema``,
                ``rho l`` is not a path through it, or ``rho l`` is not executable.
        """
        if not contains_label(schema, label):
            raise InvalidCriterionError(f"label {label!r} does not occur in the schema")
        letters = tuple(path)
        if letters and letters[-1] == LabelLetter(label):
            letters = letters[:-1]
        chosen = store if store is not None else DEFAULT_STORE
        criterion = cls(schema, letters, tuple(variables), label, chosen)
        try:
            walk(schema, criterion.full_path)
        except InvalidPathError as e:
            raise InvalidCriterionError(f"criterion path followed by @{label} is not a path: {e}") from e
        feasibility = check_consistent(path_consequences(criterion.full_path, criterion.store))
        if not feasibility:
            raise InvalidCriterionError(
                f"criterion path is not executable: {feasibility.describe(criterion.store)}"
            )
        return criterion

    @classmethod
    def end_slice(
        cls,
        schema: Schema,
        path: Sequence[Letter],
        variables: Sequence[str],
        label: str,
        store: Optional[TermStore] = None,
    ) -> "SliceCriterion":
        """Build an end-slice criterion, appending ``label`` to ``schema`` if it is absent."""
        if not contains_label(schema, label):
            schema = append_label(schema, label)
        return cls.build(schema, path, variables, label, store)

    @property
    def label_letter(self) -> LabelLetter:
        return LabelLetter(self.label)

    @property
    def full_path(self) -> Path:
        """``rho l``."""
        return self.path + (self.label_letter,)

    @cached_property
    def reference_state(self) -> HerbrandState:
        return run_predicate_free(self.path, store=self.store)

    @cached_property
    def reference_terms(self) -> Dict[str, TermId]:
        """Final term of each criterion variable after ``rho``."""
        return {v: self.reference_state.term(v) for v in self.variables}

    @cached_property
    def reference_consequences(self) -> Dict[_Key, bool]:
        """Consequences of ``rho l`` keyed by predicate term."""
        return {c.key: c.branch for c in path_consequences(self.path, self.store)}

    @cached_property
    def required_sites(self) -> FrozenSet[str]:
        """Sites every slice must keep: the label and every function in the final V-terms.

        A slice path only builds terms from its own function symbols, so both
        kinds of slice keep these; the caller closes the set upwards.
        """
        wanted = {self.label}
        for term_id in self.reference_terms.values():
            wanted |= self.store.symbols_of(term_id)
        located = site_of_symbol(self.schema)
        return frozenset(located[name] for name in wanted if name in located)


@dataclass(frozen=True)
class SliceVerdict:
    """Outcome of a slice check.

    Attributes:
        accepted: True if the quotient is a slice.
        kind: Witness kind for rejections (``mismatch``, ``consequence`` or ``path``).
        detail: One-line witness description.
        witness_path: Path through the quotient that refutes it, if any.
        reduced_paths: For accepted dynamic slices, the reduced prefixes found.
    """

    accepted: bool
    kind: Optional[str] = None
    detail: str = ""
    witness_path: Optional[Path] = None
    reduced_paths: Tuple[Path, ...] = ()

    def __bool__(self) -> bool:
        return self.accepted

    def verdict_line(self) -> str:
        """Return the machine-readable verdict line."""
        if self.accepted:
            return "ACCEPT"
        return f"REJECT kind={self.kind} detail={self.detail}"

    def describe(self) -> List[str]:
        """Return the human-readable witness dump (without the verdict line)."""
        lines: List[str] = []
        if self.witness_path is not None:
            lines.append(f"witness path: {print_path(self.witness_path)}")
        for reduced in self.reduced_paths:
            lines.append(f"reduced path: {print_path(reduced)}")
        return lines


def _prepare(criterion: SliceCriterion, quotient: Schema) -> Path:
    if not is_quotient(quotient, criterion.schema):
        raise NotAQuotientError("candidate slice is not a quotient of the sliced schema")
    if not contains_label(quotient, criterion.label):
        raise InvalidCriterionError(f"candidate slice does not contain label {criterion.label!r}")
    return project(quotient, criterion.path)


def _term_mismatch(criterion: SliceCriterion, state: HerbrandState) -> Optional[str]:
    for variable in criterion.variables:
        expected = criterion.reference_terms[variable]
        found = state.term(variable)
        if found != expected:
            render = criterion.store.render
            return f"{variable} expected={render(expected)} found={render(found)}"
    return None


def check_pfds(criterion: SliceCriterion, quotient: Schema) -> SliceVerdict:
    """Decide whether ``quotient`` is a path-faithful dynamic slice.

    Runs in time polynomial in the criterion path length.

    Raises:
        NotAQuotientError: If ``quotient`` is not a quotient of the criterion schema.
        InvalidCriterionError: If ``quotient`` lacks the criterion label.
    """
    projected = _prepare(criterion, quotient)
    state = run_predicate_free(projected, store=criterion.store)
    mismatch = _term_mismatch(criterion, state)
    if mismatch is not None:
        return SliceVerdict(False, MISMATCH, mismatch, projected + (criterion.label_letter,))
    reference = criterion.reference_consequences
    for consequence in path_consequences(projected, criterion.store):
        if reference.get(consequence.key) != consequence.branch:
            return SliceVerdict(
                False,
                CONSEQUENCE,
                format_consequence(consequence, criterion.store),
                projected + (criterion.label_letter,),
            )
    return SliceVerdict(True)


class CompatiblePath(NamedTuple):
    """A maximal path produced by compatible_maximal_paths."""

    path: Path
    terminal: bool


def _branch_order(
    cursor: PathCursor, known: Dict[_Key, bool], state: HerbrandState, prefer: Optional[bool]
) -> List[Tuple[Letter, Dict[_Key, bool]]]:
    """Return the children of a predicate cursor allowed by the known consequences."""
    letters = cursor.next_letters()
    first = letters[0]
    if not isinstance(first, PredLetter):
        return [(first, known)]
    key = (first.predicate, state.evaluate(first))
    forced = known.get(key)
    if forced is not None:
        return [(first if first.branch == forced else letters[1], known)]
    order = [True, False] if prefer is None or prefer else [False, True]
    children = []
    for branch in order:
        extended = dict(known)
        extended[key] = branch
        children.append((first if first.branch == branch else letters[1], extended))
    return children


def compatible_maximal_paths(
    quotient: Schema, criterion: SliceCriterion, cap: int
) -> Iterator[CompatiblePath]:
    """Yield every path through ``quotient`` compatible with the criterion path.

    Depth first, true branch first. A predicate whose term is already decided
    by the consequences so far (those of ``rho l`` plus the path's own) takes
    the decided branch; otherwise both branches are explored. A path is
    yielded when it is terminal or reaches ``cap`` letters.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    start = PathCursor.start(quotient)
    stack = [((), start, HerbrandState(criterion.store), criterion.reference_consequences)]
    while stack:
        path, cursor, state, known = stack.pop()
        if cursor.terminal or len(path) == cap:
            yield CompatiblePath(path, cursor.terminal)
            continue
        # Reverse so the preferred child is popped first.
        for letter, extended in reversed(_branch_order(cursor, known, state, None)):
            next_state, _ = state.step(letter)
            stack.append((path + (letter,), cursor.advance(letter), next_state, extended))


def check_pfds_definitional(
    criterion: SliceCriterion, quotient: Schema, cap: Optional[int] = None
) -> SliceVerdict:
    """Decide the path-faithful slice property by enumerating compatible paths.

    Exponential in the worst case; used to cross-check check_pfds.

    Args:
        criterion: The slicing criterion.
        quotient: Candidate slice.
        cap: Length bound for compatible paths; defaults to ``|pi l|``.

    Raises:
        NotAQuotientError: If ``quotient`` is not a quotient of the criterion schema.
        InvalidCriterionError: If ``quotient`` lacks the criterion label.
    """
    projected = _prepare(criterion, quotient)
    mismatch = _term_mismatch(criterion, run_predicate_free(projected, store=criterion.store))
    if mismatch is not None:
        return SliceVerdict(False, MISMATCH, mismatch, projected + (criterion.label_letter,))
    bound = cap if cap is not None else len(projected) + 1
    if bound < len(projected) + 1:
        raise ValueError("cap must be at least the length of the projected path plus one")
    for candidate in compatible_maximal_paths(quotient, criterion, bound):
        if candidate.path[: len(projected)] != projected:
            return SliceVerdict(False, PATH, print_path(candidate.path), candidate.path)
    return SliceVerdict(True)


def _extend_to_maximal(
    path: Path, cursor: PathCursor, state: HerbrandState, known: Dict[_Key, bool], cap: int
) -> Path:
    while not cursor.terminal and len(path) < cap:
        letter, known = _branch_order(cursor, known, state, None)[0]
        state, _ = state.step(letter)
        cursor = cursor.advance(letter)
        path = path + (letter,)
    return path


def check_ds(criterion: SliceCriterion, quotient: Schema) -> SliceVerdict:
    """Decide whether ``quotient`` is a dynamic slice.

    Raises:
        NotAQuotientError: If ``quotient`` is not a quotient of the criterion schema.
        InvalidCriterionError: If ``quotient`` lacks the criterion label.
    """
    projected = _prepare(criterion, quotient)
    label_letter = criterion.label_letter
    source = projected + (label_letter,)
    cap = len(source)
    good: List[Path] = []

    start_aligner: Optional[Aligner] = Aligner.start(quotient, source, criterion.label)
    stack = [
        (
            (),
            PathCursor.start(quotient),
            HerbrandState(criterion.store),
            criterion.reference_consequences,
            start_aligner,
        )
    ]
    while stack:
        path, cursor, state, known, aligner = stack.pop()
        if path and path[-1] == label_letter and aligner is not None and aligner.complete:
            mismatch = _term_mismatch(criterion, state)
            if mismatch is None:
                good.append(path[:-1])
                continue
            witness = _extend_to_maximal(path, cursor, state, known, cap)
            return SliceVerdict(False, MISMATCH, mismatch, witness)
        if aligner is None:
            witness = _extend_to_maximal(path, cursor, state, known, cap)
            _logger.debug("No reducible prefix along %s", print_path(witness))
            return SliceVerdict(False, PATH, print_path(witness), witness)
        if cursor.terminal or len(path) == cap:
            return SliceVerdict(False, PATH, print_path(path), path)
        expected = source[aligner.consumed] if aligner.consumed < len(source) else None
        prefer = None
        if isinstance(expected, PredLetter) and expected.symbol == cursor.next_letters()[0].symbol:
            prefer = expected.branch
        for letter, extended in reversed(_branch_order(cursor, known, state, prefer)):
            next_state, _ = state.step(letter)
            child = (path + (letter,), cursor.advance(letter), next_state, extended, aligner.feed(letter))
            stack.append(child)
    return SliceVerdict(True, reduced_paths=tuple(good))


__all__ = [
    "CONSEQUENCE",
    "MISMATCH",
    "PATH",
    "CompatiblePath",
    "SliceCriterion",
    "SliceVerdict",
    "check_ds",
    "check_pfds",
    "check_pfds_definitional",
    "compatible_maximal_paths",
]
