# coding: utf-8
"""Abstract syntax of structured linear schemas.

A schema is an immutable tree of Skip, Label, Assign, Seq, If and While
nodes. Every statement node (Label, Assign, If, While) carries a site-id: its
address from the root, e.g. ``1.T.0`` for the first statement in the true
part of the second top-level statement. Site-ids are assigned once by
:func:`with_sites` (the parser and the builder helpers call it) and are kept
by every quotient, so a quotient can be described by the set of statement
sites it retains.

Site-ids do not take part in equality: two schemas are equal when they are
structurally equal in canonical form (Seq flattened, Skip dropped inside Seq).

Letters of the path alphabet are defined here as well, because the alphabet
of a schema is a property of its syntax.

See Also:
    - src/schema/parser.py: textual syntax
    - src/paths/cursor.py: paths through schemas
"""

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from src.core.errors import ArityConflictError, NonLinearSchemaError, SymbolClashError


# =========================================================================
# Schema nodes
# =========================================================================


@dataclass(frozen=True)
class Skip:
    """The empty statement."""

    def __str__(self) -> str:
        return "skip;"


@dataclass(frozen=True)
class Label:
    """A label statement ``label L;``."""

    name: str
    site: str = field(default="", compare=False)


@dataclass(frozen=True)
class Assign:
    """An assignment ``target := function(args);``."""

    target: str
    function: str
    args: Tuple[str, ...] = ()
    site: str = field(default="", compare=False)


@dataclass(frozen=True)
class Seq:
    """A sequence of two or more non-Skip, non-Seq statements."""

    items: Tuple["Schema", ...]


@dataclass(frozen=True)
class If:
    """A conditional ``if predicate(args) { then_part } else { else_part }``."""

    predicate: str
    args: Tuple[str, ...]
    then_part: "Schema"
    else_part: "Schema"
    site: str = field(default="", compare=False)


@dataclass(frozen=True)
class While:
    """A loop ``while predicate(args) { body }``."""

    predicate: str
    args: Tuple[str, ...]
    body: "Schema"
    site: str = field(default="", compare=False)


Schema = Union[Skip, Label, Assign, Seq, If, While]
Statement = Union[Label, Assign, If, While]

SKIP = Skip()


# =========================================================================
# Path alphabet
# =========================================================================


@dataclass(frozen=True)
class AssignLetter:
    """The letter of an assignment ``target := function(args)``."""

    target: str
    function: str
    args: Tuple[str, ...] = ()

    @property
    def symbol(self) -> str:
        return self.function

    @property
    def token(self) -> str:
        return self.function


@dataclass(frozen=True)
class PredLetter:
    """A predicate letter: predicate ``predicate(args)`` taking ``branch``."""

    predicate: str
    args: Tuple[str, ...]
    branch: bool

    @property
    def symbol(self) -> str:
        return self.predicate

    @property
    def token(self) -> str:
        return f"{self.predicate}:{'T' if self.branch else 'F'}"

    def flipped(self) -> "PredLetter":
        return replace(self, branch=not self.branch)


@dataclass(frozen=True)
class LabelLetter:
    """The letter of a label."""

    name: str

    @property
    def symbol(self) -> str:
        return self.name

    @property
    def token(self) -> str:
        return f"@{self.name}"


Letter = Union[AssignLetter, PredLetter, LabelLetter]
Path = Tuple[Letter, ...]


def letter_of(node: Union[Label, Assign]) -> Letter:
    """Return the letter emitted by a Label or Assign node."""
    if isinstance(node, Label):
        return LabelLetter(node.name)
    return AssignLetter(node.target, node.function, node.args)


# =========================================================================
# Construction helpers
# =========================================================================


def seq(*items: Schema) -> Schema:
    """Build a sequence in canonical form.

    Nested sequences are flattened and Skip is dropped; an empty result is
    Skip and a single statement is returned unwrapped.
    """
    flat: List[Schema] = []
    for item in items:
        if isinstance(item, Skip):
            continue
        if isinstance(item, Seq):
            flat.extend(item.items)
        else:
            flat.append(item)
    if not flat:
        return SKIP
    if len(flat) == 1:
        return flat[0]
    return Seq(tuple(flat))


def assign(target: str, function: str, *args: str) -> Assign:
    return Assign(target, function, tuple(args))


def label(name: str) -> Label:
    return Label(name)


def if_(predicate: str, args: Iterable[str], then_part: Schema, else_part: Schema = SKIP) -> If:
    return If(predicate, tuple(args), then_part, else_part)


def while_(predicate: str, args: Iterable[str], body: Schema) -> While:
    return While(predicate, tuple(args), body)


def statements(schema: Schema) -> Tuple[Schema, ...]:
    """Return the top-level statements of a schema (empty for Skip)."""
    if isinstance(schema, Skip):
        return ()
    if isinstance(schema, Seq):
        return schema.items
    return (schema,)


def with_sites(schema: Schema, prefix: str = "") -> Schema:
    """Return a copy of ``schema`` with address site-ids assigned.

    The canonical form is restored on the way, so builder output and parser
    output compare equal.
    """
    rebuilt: List[Schema] = []
    for index, node in enumerate(statements(seq(schema))):
        site = f"{prefix}{index}"
        if isinstance(node, Label):
            rebuilt.append(replace(node, site=site))
        elif isinstance(node, Assign):
            rebuilt.append(replace(node, site=site))
        elif isinstance(node, If):
            rebuilt.append(
                If(
                    node.predicate,
                    node.args,
                    with_sites(node.then_part, f"{site}.T."),
                    with_sites(node.else_part, f"{site}.F."),
                    site,
                )
            )
        elif isinstance(node, While):
            rebuilt.append(
                While(node.predicate, node.args, with_sites(node.body, f"{site}.B."), site)
            )
    return seq(*rebuilt)


def append_label(schema: Schema, name: str) -> Schema:
    """Return ``schema`` followed by ``label name;`` (the end-slice form)."""
    return with_sites(seq(schema, Label(name)))


# =========================================================================
# Traversal
# =========================================================================


def iter_statements(schema: Schema) -> Iterator[Statement]:
    """Yield every statement node in pre-order."""
    for node in statements(schema):
        yield node  # type: ignore[misc]
        if isinstance(node, If):
            yield from iter_statements(node.then_part)
            yield from iter_statements(node.else_part)
        elif isinstance(node, While):
            yield from iter_statements(node.body)


def site_parents(schema: Schema) -> Dict[str, Optional[str]]:
    """Map each statement site to the site of its enclosing If/While (or None)."""
    parents: Dict[str, Optional[str]] = {}

    def visit(node: Schema, parent: Optional[str]) -> None:
        for stmt in statements(node):
            parents[stmt.site] = parent  # type: ignore[union-attr]
            if isinstance(stmt, If):
                visit(stmt.then_part, stmt.site)
                visit(stmt.else_part, stmt.site)
            elif isinstance(stmt, While):
                visit(stmt.body, stmt.site)

    visit(schema, None)
    return parents


def sites(schema: Schema) -> List[str]:
    """Return all statement sites in pre-order."""
    return [stmt.site for stmt in iter_statements(schema)]


def symbol_of(stmt: Statement) -> str:
    """Return the function, predicate or label name owned by a statement."""
    if isinstance(stmt, Label):
        return stmt.name
    if isinstance(stmt, Assign):
        return stmt.function
    return stmt.predicate


def symbols(schema: Schema) -> FrozenSet[str]:
    """Return the function, predicate and label names occurring in ``schema``."""
    return frozenset(symbol_of(stmt) for stmt in iter_statements(schema))


def site_of_symbol(schema: Schema) -> Dict[str, str]:
    """Map each symbol of a linear schema to the site of its statement."""
    return {symbol_of(stmt): stmt.site for stmt in iter_statements(schema)}


def contains_label(schema: Schema, name: str) -> bool:
    return any(isinstance(stmt, Label) and stmt.name == name for stmt in iter_statements(schema))


def is_predicate_free(schema: Schema) -> bool:
    return not any(isinstance(stmt, (If, While)) for stmt in iter_statements(schema))


# =========================================================================
# Symbol table and linearity
# =========================================================================


@dataclass(frozen=True)
class SymbolTable:
    """Symbols of a schema with their arities.

    Attributes:
        functions: Function name to arity.
        predicates: Predicate name to arity.
        variables: Variable names.
        labels: Label names.
    """

    functions: Dict[str, int]
    predicates: Dict[str, int]
    variables: FrozenSet[str]
    labels: FrozenSet[str]

    @classmethod
    def infer(cls, schema: Schema) -> "SymbolTable":
        """Infer the symbol table of ``schema`` from use.

        Raises:
            ArityConflictError: If a symbol is used with two arities.
            SymbolClashError: If a name lives in two namespaces.
        """
        functions: Dict[str, int] = {}
        predicates: Dict[str, int] = {}
        variables = set()
        labels = set()

        def record(table: Dict[str, int], kind: str, name: str, arity: int) -> None:
            known = table.setdefault(name, arity)
            if known != arity:
                raise ArityConflictError(
                    f"{kind} {name!r} used with arity {known} and {arity}"
                )

        for stmt in iter_statements(schema):
            if isinstance(stmt, Label):
                labels.add(stmt.name)
            elif isinstance(stmt, Assign):
                record(functions, "function", stmt.function, len(stmt.args))
                variables.add(stmt.target)
                variables.update(stmt.args)
            else:
                record(predicates, "predicate", stmt.predicate, len(stmt.args))
                variables.update(stmt.args)

        spaces = {
            "function": set(functions),
            "predicate": set(predicates),
            "variable": variables,
            "label": labels,
        }
        for (kind_a, names_a), (kind_b, names_b) in itertools.combinations(spaces.items(), 2):
            shared = names_a & names_b
            if shared:
                raise SymbolClashError(
                    f"name(s) {', '.join(sorted(shared))} used both as {kind_a} and {kind_b}"
                )

        return cls(functions, predicates, frozenset(variables), frozenset(labels))


@dataclass(frozen=True)
class LinearityReport:
    """Result of a linearity check.

    Attributes:
        repeated: Function/predicate/label names occurring more than once.
    """

    repeated: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.repeated

    def __bool__(self) -> bool:
        return self.ok


def check_linear(schema: Schema) -> LinearityReport:
    """Report the symbols that occur more than once in ``schema``."""
    counts = Counter(symbol_of(stmt) for stmt in iter_statements(schema))
    return LinearityReport(tuple(sorted(name for name, n in counts.items() if n > 1)))


def require_linear(schema: Schema) -> None:
    """Raise NonLinearSchemaError unless ``schema`` is linear."""
    report = check_linear(schema)
    if not report.ok:
        raise NonLinearSchemaError(f"schema is not linear: repeated {', '.join(report.repeated)}")


def alphabet(schema: Schema) -> FrozenSet[Letter]:
    """Return the path alphabet of a linear schema.

    Raises:
        NonLinearSchemaError: If ``schema`` is not linear.
    """
    require_linear(schema)
    letters = set()
    for stmt in iter_statements(schema):
        if isinstance(stmt, (Label, Assign)):
            letters.add(letter_of(stmt))
        else:
            letters.add(PredLetter(stmt.predicate, stmt.args, True))
            letters.add(PredLetter(stmt.predicate, stmt.args, False))
    return frozenset(letters)


# =========================================================================
# Quotients
# =========================================================================


@dataclass(frozen=True)
class QuotientMatch:
    """Outcome of a quotient test.

    Attributes:
        ok: True if the candidate is a quotient.
        deleted: Statement sites of the original that the quotient drops.
    """

    ok: bool
    deleted: FrozenSet[str] = frozenset()

    def __bool__(self) -> bool:
        return self.ok


def _same_head(candidate: Schema, original: Schema) -> bool:
    if isinstance(candidate, Label) and isinstance(original, Label):
        return candidate.name == original.name
    if isinstance(candidate, Assign) and isinstance(original, Assign):
        return candidate == original
    if isinstance(candidate, If) and isinstance(original, If):
        return (candidate.predicate, candidate.args) == (original.predicate, original.args)
    if isinstance(candidate, While) and isinstance(original, While):
        return (candidate.predicate, candidate.args) == (original.predicate, original.args)
    return False


def _match(candidate: Schema, original: Schema, retained: List[str]) -> bool:
    """Embed ``candidate`` into ``original``; collect retained original sites."""
    wanted = statements(candidate)
    available = statements(original)
    position = 0
    for node in wanted:
        while position < len(available):
            target = available[position]
            position += 1
            mark = len(retained)
            if _match_node(node, target, retained):
                break
            del retained[mark:]
        else:
            return False
    return True


def _match_node(candidate: Schema, original: Schema, retained: List[str]) -> bool:
    if not _same_head(candidate, original):
        return False
    retained.append(original.site)  # type: ignore[union-attr]
    if isinstance(candidate, If) and isinstance(original, If):
        return _match(candidate.then_part, original.then_part, retained) and _match(
            candidate.else_part, original.else_part, retained
        )
    if isinstance(candidate, While) and isinstance(original, While):
        return _match(candidate.body, original.body, retained)
    return True


def is_quotient(candidate: Schema, original: Schema) -> QuotientMatch:
    """Decide whether ``candidate`` is a quotient of ``original``.

    On success the match carries the original's deleted statement sites.
    """
    retained: List[str] = []
    if not _match(candidate, original, retained):
        return QuotientMatch(False)
    return QuotientMatch(True, frozenset(sites(original)) - frozenset(retained))


def quotient_from_sites(schema: Schema, retained: Iterable[str]) -> Schema:
    """Rebuild the quotient of ``schema`` keeping exactly the ``retained`` statements.

    A statement whose site is not retained is replaced by Skip together with
    everything nested in it.
    """
    keep = frozenset(retained)

    def rebuild(node: Schema) -> Schema:
        kept: List[Schema] = []
        for stmt in statements(node):
            if stmt.site not in keep:  # type: ignore[union-attr]
                continue
            if isinstance(stmt, If):
                then_part, else_part = rebuild(stmt.then_part), rebuild(stmt.else_part)
                kept.append(replace(stmt, then_part=then_part, else_part=else_part))
            elif isinstance(stmt, While):
                kept.append(replace(stmt, body=rebuild(stmt.body)))
            else:
                kept.append(stmt)
        return seq(*kept)

    return rebuild(schema)


def required_closure(schema: Schema, must_contain: Iterable[str]) -> FrozenSet[str]:
    """Close a site set upwards under the enclosing-statement relation."""
    parents = site_parents(schema)
    closed = set()
    for site in must_contain:
        current: Optional[str] = site
        while current is not None and current not in closed:
            closed.add(current)
            current = parents[current]
    return frozenset(closed)


def enumerate_quotients(
    schema: Schema, must_contain: Iterable[str] = (), ascending: bool = False
) -> Iterator[Schema]:
    """Yield every quotient of ``schema`` retaining ``must_contain``.

    Quotients are yielded by descending number of retained statements, so
    ``schema`` itself comes first; each quotient appears exactly once. With
    ``ascending`` the order is reversed level by level (smallest first).
    """
    all_sites = sites(schema)
    unknown = set(must_contain) - set(all_sites)
    if unknown:
        raise ValueError(f"unknown site(s): {', '.join(sorted(unknown))}")
    required = required_closure(schema, must_contain)
    free = [site for site in all_sites if site not in required]
    parents = site_parents(schema)

    levels = range(len(free), -1, -1) if ascending else range(len(free) + 1)
    for k in levels:
        for combo in itertools.combinations(free, k):
            deleted = frozenset(combo)
            # A deleted statement takes its whole subtree with it; count each
            # quotient once by requiring the deleted set to be closed downwards.
            if any(parents[site] in deleted for site in free if site not in deleted):
                continue
            yield quotient_from_sites(schema, (s for s in all_sites if s not in deleted))


def count_quotients(schema: Schema) -> int:
    """Count the quotients of ``schema`` by structural recursion."""
    if isinstance(schema, Skip):
        return 1
    if isinstance(schema, Seq):
        total = 1
        for item in schema.items:
            total *= count_quotients(item)
        return total
    if isinstance(schema, If):
        return 1 + count_quotients(schema.then_part) * count_quotients(schema.else_part)
    if isinstance(schema, While):
        return 1 + count_quotients(schema.body)
    return 2


def delete_symbols(schema: Schema, names: Iterable[str]) -> Schema:
    """Return the quotient of ``schema`` without the statements owning ``names``.

    Deleting an If or While statement deletes everything nested in it.
    """
    doomed = frozenset(names)
    kept = (stmt.site for stmt in iter_statements(schema) if symbol_of(stmt) not in doomed)
    return quotient_from_sites(schema, kept)
