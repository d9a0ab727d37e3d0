# coding: utf-8
"""Symbolic execution of paths over the Herbrand domain.

Functions act by building terms, so the state after a path is a map from
variables to term ids in a TermStore, starting from the natural state in
which every variable denotes itself. A predicate letter contributes a
consequence: the predicate applied to the current argument terms, together
with the branch taken. A path is executable exactly when its consequences
never force one predicate term both ways; two paths are compatible when the
union of their consequences is consistent.

See Also:
    - src/herbrand/terms.py: the shared term store
    - src/paths/cursor.py: path validation used by the schema-level entry points
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from src.core.errors import SchliceError
from src.herbrand.terms import DEFAULT_STORE, TermId, TermStore, VarLeaf
from src.paths.cursor import walk
from src.schema.model import (
    Assign,
    AssignLetter,
    Label,
    Letter,
    PredLetter,
    Schema,
    is_predicate_free,
    iter_statements,
    letter_of,
)

_logger = logging.getLogger(__name__)


class HerbrandState:
    """Immutable variable-to-term map; unbound variables denote themselves.

    Example:
        >>> state = HerbrandState().assign("u", "h", ())
        >>> state.render("u"), state.render("w")
        ('h()', 'w')
    """

    __slots__ = ("_store", "_bindings")

    def __init__(self, store: Optional[TermStore] = None, bindings: Optional[Mapping[str, TermId]] = None):
        self._store = store if store is not None else DEFAULT_STORE
        # a variable bound to itself is unbound
        self._bindings: Dict[str, TermId] = {
            name: term
            for name, term in (bindings or {}).items()
            if self._store.node(term) != VarLeaf(name)
        }

    @property
    def store(self) -> TermStore:
        return self._store

    def term(self, variable: str) -> TermId:
        """Return the term id currently denoted by ``variable``."""
        bound = self._bindings.get(variable)
        if bound is not None:
            return bound
        return self._store.var(variable)

    def render(self, variable: str) -> str:
        return self._store.render(self.term(variable))

    def assign(self, target: str, function: str, args: Sequence[str]) -> "HerbrandState":
        """Return the state after ``target := function(args)``."""
        value = self._store.app(function, [self.term(a) for a in args])
        bindings = dict(self._bindings)
        bindings[target] = value
        return HerbrandState(self._store, bindings)

    def evaluate(self, letter: PredLetter) -> Tuple[TermId, ...]:
        """Return the argument terms of a predicate letter in this state."""
        return tuple(self.term(a) for a in letter.args)

    def step(self, letter: Letter) -> Tuple["HerbrandState", Optional["Consequence"]]:
        """Execute one letter; predicate letters yield a consequence, labels nothing."""
        if isinstance(letter, AssignLetter):
            return self.assign(letter.target, letter.function, letter.args), None
        if isinstance(letter, PredLetter):
            return self, Consequence(letter.predicate, self.evaluate(letter), letter.branch)
        return self, None

    def bound_variables(self) -> Tuple[str, ...]:
        return tuple(sorted(self._bindings))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HerbrandState):
            return NotImplemented
        return self._store is other._store and self._bindings == other._bindings

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._bindings.items())))

    def __repr__(self) -> str:
        shown = ", ".join(f"{n}={self.render(n)}" for n in self.bound_variables())
        return f"HerbrandState({shown})"


class Consequence(NamedTuple):
    """A branch fact ``predicate(terms) = branch`` forced along a path."""

    predicate: str
    terms: Tuple[TermId, ...]
    branch: bool

    @property
    def key(self) -> Tuple[str, Tuple[TermId, ...]]:
        return (self.predicate, self.terms)


def format_consequence(consequence: Consequence, store: Optional[TermStore] = None) -> str:
    """Serialise a consequence as ``p(t1,...,tk)=T|F``."""
    store = store if store is not None else DEFAULT_STORE
    args = ",".join(store.render(t) for t in consequence.terms)
    return f"{consequence.predicate}({args})={'T' if consequence.branch else 'F'}"


def _letters_of(source: Union[Sequence[Letter], Schema]) -> Iterable[Letter]:
    if isinstance(source, (tuple, list)):
        return source
    schema: Schema = source  # type: ignore[assignment]
    if not is_predicate_free(schema):
        raise SchliceError("run_predicate_free needs a predicate-free schema")
    return [letter_of(s) for s in iter_statements(schema) if isinstance(s, (Assign, Label))]


def run_predicate_free(
    source: Union[Sequence[Letter], Schema],
    start: Optional[HerbrandState] = None,
    store: Optional[TermStore] = None,
) -> HerbrandState:
    """Execute the assignments of a path (or predicate-free schema).

    Predicate and label letters are skipped, as in schema(σ).

    Args:
        source: A path, or a schema without If/While statements.
        start: Initial state; defaults to the natural state.
        store: Term store used when ``start`` is not given.
    """
    state = start if start is not None else HerbrandState(store)
    for letter in _letters_of(source):
        if isinstance(letter, AssignLetter):
            state = state.assign(letter.target, letter.function, letter.args)
    return state


def final_term(
    schema: Schema, path: Sequence[Letter], variable: str, store: Optional[TermStore] = None
) -> TermId:
    """Return the term of ``variable`` after executing ``path`` from the natural state.

    Raises:
        InvalidPathError: If ``path`` is not a path through ``schema``.
    """
    walk(schema, path)
    return run_predicate_free(path, store=store).term(variable)


def path_consequences(path: Sequence[Letter], store: Optional[TermStore] = None) -> List[Consequence]:
    """Return the consequences of ``path`` without validating it against a schema."""
    state = HerbrandState(store)
    found: List[Consequence] = []
    for letter in path:
        state, consequence = state.step(letter)
        if consequence is not None:
            found.append(consequence)
    return found


def consequences(
    schema: Schema, path: Sequence[Letter], store: Optional[TermStore] = None
) -> List[Consequence]:
    """Return one consequence per predicate letter of ``path``, in order.

    Raises:
        InvalidPathError: If ``path`` is not a path through ``schema``.
    """
    walk(schema, path)
    return path_consequences(path, store)


@dataclass(frozen=True)
class Feasibility:
    """Outcome of an executability or compatibility test.

    Attributes:
        ok: True if the consequence set is consistent.
        clash: The predicate term forced both ways, when not ok.
    """

    ok: bool
    clash: Optional[Tuple[str, Tuple[TermId, ...]]] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self, store: Optional[TermStore] = None) -> str:
        if self.clash is None:
            return "consistent"
        store = store if store is not None else DEFAULT_STORE
        predicate, terms = self.clash
        return f"{predicate}({','.join(store.render(t) for t in terms)}) forced both ways"


def check_consistent(items: Iterable[Consequence]) -> Feasibility:
    """Decide whether no predicate term is forced to both branch values."""
    seen: Dict[Tuple[str, Tuple[TermId, ...]], bool] = {}
    for consequence in items:
        known = seen.setdefault(consequence.key, consequence.branch)
        if known != consequence.branch:
            return Feasibility(False, consequence.key)
    return Feasibility(True)


def is_executable(schema: Schema, path: Sequence[Letter], store: Optional[TermStore] = None) -> Feasibility:
    """Decide executability of a path through ``schema``.

    Raises:
        InvalidPathError: If ``path`` is not a path through ``schema``.
    """
    result = check_consistent(consequences(schema, path, store))
    if not result:
        _logger.debug("Path not executable: %s", result.describe(store))
    return result


def are_compatible(
    schema: Schema,
    path: Sequence[Letter],
    other_schema: Schema,
    other_path: Sequence[Letter],
    store: Optional[TermStore] = None,
) -> Feasibility:
    """Decide whether two paths are realisable under one Herbrand interpretation.

    Raises:
        InvalidPathError: If either path does not validate against its schema.
    """
    return check_consistent(
        consequences(schema, path, store) + consequences(other_schema, other_path, store)
    )


__all__ = [
    "Consequence",
    "Feasibility",
    "HerbrandState",
    "are_compatible",
    "check_consistent",
    "consequences",
    "final_term",
    "format_consequence",
    "is_executable",
    "path_consequences",
    "run_predicate_free",
]
