# coding: utf-8
"""3SAT hardness gadget: a loop schema and path per 3-CNF formula.

For a formula over variables ``1..n`` with ``m`` clauses the schema is::

    while p(v) {
        v := H(v);
        if q_good(v) { x := g_good(); }
        if q_bad(v) { x := g_bad(); }
        if q_link(v) { b := g_link(x); }
        if q_reset(v) { b := g_reset(); }
        if Q_linkreset(v) { v := F_linkreset(b, v); }
        if q_1(v) { x := g_1(b); }
        if q_1'(v) { x := g_1'(b); }
        ...                                   # up to q_n, q_n'
        if Q_test(v) { if q_test(x) { v := F_test(v); } }
    }
    label end;

g_i stands for the literal ``i`` and g_i' for its negation. The criterion
path enters the loop ``4 + 3n + 6n(n-1) + m`` times, one iteration per
entry of the type list built in :func:`gen_3sat`, then leaves it. Every
iteration starts with ``p:T H``; "through F_test" means
``Q_test:T q_test:T F_test`` and "not through q_test" means ``Q_test:F``.
Ordered pairs ``(i, j)`` of type 4 run in lexicographic order.

The schema has a non-trivial dynamic end slice for ``v`` exactly when the
formula is satisfiable; the quotient chosen by a satisfying valuation is then
also path-faithful.

See Also:
    - src/gadgets/roundtrip.py: checks that correspondence
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

from src.core.errors import SymbolClashError
from src.core.settings import Settings
from src.gadgets.cnf import Cnf3
from src.herbrand.engine import HerbrandState, check_consistent, format_consequence, path_consequences
from src.herbrand.terms import DEFAULT_STORE, TermStore
from src.paths.cursor import walk
from src.schema.model import (
    AssignLetter,
    LabelLetter,
    Letter,
    Path,
    Schema,
    alphabet,
    append_label,
    assign,
    delete_symbols,
    if_,
    seq,
    while_,
)
from src.schema.parser import CriterionFile, print_criterion, print_path, print_schema
from src.slicing.checkers import SliceCriterion

_logger = logging.getLogger(__name__)

# the gadget's working variables; the criterion variable must differ from both
_SCRATCH = ("x", "b")


def literal_function(index: int, positive: bool) -> str:
    """Name of the function symbol standing for a literal."""
    return f"g_{index}" if positive else f"g_{index}'"


def literal_predicate(index: int, positive: bool) -> str:
    """Name of the predicate guarding a literal's assignment."""
    return f"q_{index}" if positive else f"q_{index}'"


def _criterion_variable(variable: Optional[str]) -> str:
    v = variable or Settings.criterionVariable
    if v in _SCRATCH:
        raise SymbolClashError(f"criterion variable {v!r} is one of the gadget's working variables")
    return v


def gadget_schema(variables: int, label: Optional[str] = None, variable: Optional[str] = None) -> Schema:
    """Build the gadget schema for ``variables`` formula variables, ending in ``label``.

    The criterion variable defaults to Settings.criterionVariable.

    Raises:
        SymbolClashError: If the criterion variable is ``x`` or ``b``.
    """
    v = _criterion_variable(variable)
    body: List[Schema] = [
        assign(v, "H", v),
        if_("q_good", [v], assign("x", "g_good")),
        if_("q_bad", [v], assign("x", "g_bad")),
        if_("q_link", [v], assign("b", "g_link", "x")),
        if_("q_reset", [v], assign("b", "g_reset")),
        if_("Q_linkreset", [v], assign(v, "F_linkreset", "b", v)),
    ]
    for index in range(1, variables + 1):
        for positive in (True, False):
            guarded = assign("x", literal_function(index, positive), "b")
            body.append(if_(literal_predicate(index, positive), [v], guarded))
    body.append(if_("Q_test", [v], if_("q_test", ["x"], assign(v, "F_test", v))))
    return append_label(while_("p", [v], seq(*body)), label or Settings.endLabel)


class Segment(NamedTuple):
    """One loop iteration of the criterion path.

    Attributes:
        kind: Path type, e.g. ``"0.1"``, ``"2'"``, ``"4.3"``, ``"5"``.
        detail: Variable indices or clause number the iteration belongs to.
        start: Index of its ``p:T`` letter in the path.
        end: Index one past its last letter.
    """

    kind: str
    detail: Tuple[int, ...]
    start: int
    end: int


@dataclass(frozen=True)
class _Iteration:
    good: bool = False
    bad: bool = False
    link: bool = False
    reset: bool = False
    link_reset: bool = False
    literals: FrozenSet[Tuple[int, bool]] = frozenset()
    test: bool = False


@dataclass(frozen=True)
class GadgetInstance:
    """A generated gadget.

    Attributes:
        formula: The encoded formula.
        schema: Gadget schema, ending with the criterion label.
        path: Criterion path without the label letter.
        variable: Criterion variable.
        label: Criterion label.
        segments: Iteration bookkeeping, in path order.
    """

    formula: Cnf3
    schema: Schema
    path: Path
    variable: str
    label: str
    segments: Tuple[Segment, ...] = field(default=(), compare=False)

    @property
    def loop_entries(self) -> int:
        return len(self.segments)

    @property
    def expected_loop_entries(self) -> int:
        n, m = self.formula.variables, len(self.formula.clauses)
        return 4 + 3 * n + 6 * n * (n - 1) + m

    @property
    def full_path(self) -> Path:
        return self.path + (LabelLetter(self.label),)

    def criterion(self, store: Optional[TermStore] = None) -> SliceCriterion:
        return SliceCriterion.build(self.schema, self.path, (self.variable,), self.label, store)


def _iteration_tokens(variables: int, step: _Iteration) -> List[str]:
    tokens = ["p:T", "H"]
    for flag, predicate, function in (
        (step.good, "q_good", "g_good"),
        (step.bad, "q_bad", "g_bad"),
        (step.link, "q_link", "g_link"),
        (step.reset, "q_reset", "g_reset"),
        (step.link_reset, "Q_linkreset", "F_linkreset"),
    ):
        tokens += [f"{predicate}:T", function] if flag else [f"{predicate}:F"]
    for index in range(1, variables + 1):
        for positive in (True, False):
            predicate = literal_predicate(index, positive)
            if (index, positive) in step.literals:
                tokens += [f"{predicate}:T", literal_function(index, positive)]
            else:
                tokens.append(f"{predicate}:F")
    tokens += ["Q_test:T", "q_test:T", "F_test"] if step.test else ["Q_test:F"]
    return tokens


def _iterations(formula: Cnf3) -> List[Tuple[str, Tuple[int, ...], _Iteration]]:
    n = formula.variables
    plan: List[Tuple[str, Tuple[int, ...], _Iteration]] = [
        ("0.1", (), _Iteration(good=True, link=True, link_reset=True)),
        ("0.2", (), _Iteration(reset=True, link_reset=True)),
        ("0.3", (), _Iteration(bad=True, link=True, link_reset=True)),
        ("1", (), _Iteration(good=True, test=True)),
    ]
    for i in range(1, n + 1):
        chosen = frozenset({(i, True)})
        plan.append(("2", (i,), _Iteration(good=True, reset=True, literals=chosen, test=True)))
    for i in range(1, n + 1):
        chosen = frozenset({(i, False)})
        plan.append(("2'", (i,), _Iteration(good=True, reset=True, literals=chosen, test=True)))
    for i in range(1, n + 1):
        chosen = frozenset({(i, False)})
        plan.append(("3", (i,), _Iteration(good=True, link=True, literals=chosen, test=True)))
    for prime, positive in (("", True), ("'", False)):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                positive_i = frozenset({(i, True)})
                negative_i = frozenset({(i, False)})
                second = frozenset({(j, positive)})
                plan += [
                    (f"4.1{prime}", (i, j), _Iteration(good=True, reset=True, literals=positive_i)),
                    (f"4.2{prime}", (i, j), _Iteration(link=True, literals=negative_i)),
                    (f"4.3{prime}", (i, j), _Iteration(reset=True, literals=second, test=True)),
                ]
    for number, clause in enumerate(formula.clauses, start=1):
        chosen = frozenset((lit.index, lit.positive) for lit in clause)
        plan.append(("5", (number,), _Iteration(bad=True, reset=True, literals=chosen, test=True)))
    return plan


def gen_3sat(formula: Cnf3, label: Optional[str] = None, variable: Optional[str] = None) -> GadgetInstance:
    """Generate the gadget schema and criterion path for ``formula``.

    ``label`` and ``variable`` default to Settings.endLabel and
    Settings.criterionVariable.
    """
    end = label or Settings.endLabel
    v = _criterion_variable(variable)
    schema = gadget_schema(formula.variables, end, v)
    letters: Dict[str, Letter] = {letter.token: letter for letter in alphabet(schema)}
    path: List[Letter] = []
    segments: List[Segment] = []
    for kind, detail, step in _iterations(formula):
        start = len(path)
        path.extend(letters[token] for token in _iteration_tokens(formula.variables, step))
        segments.append(Segment(kind, detail, start, len(path)))
    path.append(letters["p:F"])
    instance = GadgetInstance(formula, schema, tuple(path), v, end, tuple(segments))
    _logger.info(
        "Generated gadget for %d variables, %d clauses: %d loop entries, %d letters",
        formula.variables,
        len(formula.clauses),
        instance.loop_entries,
        len(instance.path),
    )
    return instance


def delta_quotient(instance: GadgetInstance, valuation: Dict[int, bool]) -> Schema:
    """Return the quotient keeping ``q_i``/``g_i`` when variable ``i`` is true, else ``q_i'``/``g_i'``.

    The other if statement of each pair is deleted; everything else is kept.
    """
    doomed = [
        literal_predicate(index, not valuation[index]) for index in range(1, instance.formula.variables + 1)
    ]
    return delete_symbols(instance.schema, doomed)


@dataclass(frozen=True)
class GadgetFacts:
    """Properties of a generated instance; ``failures`` lists the ones that do not hold."""

    failures: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def check_gadget_facts(instance: GadgetInstance, store: Optional[TermStore] = None) -> GadgetFacts:
    """Check the structural facts the hardness argument relies on.

    - the path is terminal and executable, with the expected loop-entry count;
    - it assigns the criterion variable with H, F_linkreset and F_test, and ``b`` with g_link and g_reset;
    - its final value nests H once per loop entry;
    - it never evaluates ``q_test(g_bad())`` or ``q_test(g_i'(g_link(g_i(g_reset()))))``;
    - no term the criterion variable holds along the path contains a literal function.
    """
    store = store if store is not None else DEFAULT_STORE
    failures: List[str] = []
    n = instance.formula.variables

    if not walk(instance.schema, instance.full_path).terminal:
        failures.append("criterion path is not terminal")
    facts = path_consequences(instance.full_path, store)
    feasibility = check_consistent(facts)
    if not feasibility:
        failures.append(f"criterion path is not executable: {feasibility.describe(store)}")
    if instance.loop_entries != instance.expected_loop_entries:
        failures.append(f"{instance.loop_entries} loop entries, expected {instance.expected_loop_entries}")

    assigned = {(l.target, l.function) for l in instance.path if isinstance(l, AssignLetter)}
    v = instance.variable
    required = (
        (v, "H"),
        (v, "F_linkreset"),
        (v, "F_test"),
        ("b", "g_link"),
        ("b", "g_reset"),
    )
    for target, function in required:
        if (target, function) not in assigned:
            failures.append(f"path never assigns {target} := {function}(...)")

    bad = store.app("g_bad", [])
    forbidden_terms = {("q_test", (bad,))}
    reset = store.app("g_reset", [])
    for i in range(1, n + 1):
        inner = store.app(literal_function(i, True), [reset])
        outer = store.app(literal_function(i, False), [store.app("g_link", [inner])])
        forbidden_terms.add(("q_test", (outer,)))
    for consequence in facts:
        if consequence.key in forbidden_terms:
            failures.append(f"path evaluates {format_consequence(consequence, store)}")

    literal_symbols = {literal_function(i, p) for i in range(1, n + 1) for p in (True, False)}
    state = HerbrandState(store)
    for letter in instance.path:
        state, _ = state.step(letter)
        if isinstance(letter, AssignLetter) and letter.target == instance.variable:
            leaked = store.symbols_of(state.term(instance.variable)) & literal_symbols
            if leaked:
                failures.append(f"{instance.variable} picks up {', '.join(sorted(leaked))}")
                break

    depth = store.depth(state.term(instance.variable), "H")
    if depth != instance.loop_entries:
        failures.append(f"final {instance.variable} nests H {depth} times, expected {instance.loop_entries}")
    return GadgetFacts(tuple(failures))


def write_gadget(
    instance: GadgetInstance, directory: FilePath, stem: str
) -> Tuple[FilePath, FilePath, FilePath]:
    """Write ``<stem>.schema``, ``<stem>.path`` and ``<stem>.criterion`` into ``directory``."""
    directory = FilePath(directory)
    directory.mkdir(parents=True, exist_ok=True)
    schema_file = directory / f"{stem}.schema"
    path_file = directory / f"{stem}.path"
    criterion_file = directory / f"{stem}.criterion"
    schema_file.write_text(print_schema(instance.schema), encoding="utf-8")
    path_file.write_text(print_path(instance.full_path) + "\n", encoding="utf-8")
    criterion_file.write_text(
        print_criterion(CriterionFile(instance.label, (instance.variable,))), encoding="utf-8"
    )
    _logger.info("Wrote gadget files %s.{schema,path,criterion} to %s", stem, directory)
    return schema_file, path_file, criterion_file


__all__ = [
    "GadgetFacts",
    "GadgetInstance",
    "Segment",
    "check_gadget_facts",
    "delta_quotient",
    "gadget_schema",
    "gen_3sat",
    "literal_function",
    "literal_predicate",
    "write_gadget",
]
