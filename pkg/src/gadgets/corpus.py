# coding: utf-8
"""Worked examples with their expected verdicts.

Each fixture pairs a schema and its criterion path with the verdicts the
analyses must reproduce; run_fixture checks them and reports pass/fail per
expectation. The CLI ``corpus`` command runs them all.

Fixtures:
    - two_branch: a two-path schema; executing ``h p:T f`` leaves ``v = f(h())``.
    - faithful_loop: a loop where only the schema itself is a path-faithful slice for
      ``v``, while deleting ``t := H(t)`` still gives a dynamic slice.
    - sat_gadget: the hardness gadget for the one-clause formula ``(1 or 1 or 1)``.
    - two_minima: a loop with two incomparable minimal path-faithful slices.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from src.gadgets.cnf import Cnf3, brute_force_sat
from src.gadgets.sat_reduction import delta_quotient, gen_3sat
from src.herbrand.engine import run_predicate_free
from src.herbrand.terms import TermStore
from src.paths.cursor import PathKind, validate_path
from src.schema.model import LabelLetter, Path, Schema, append_label, delete_symbols
from src.schema.parser import parse_path, parse_schema, print_path
from src.slicing.checkers import SliceCriterion, check_ds, check_pfds, check_pfds_definitional
from src.slicing.search import SearchGoal, SliceMode, find_slices

_logger = logging.getLogger(__name__)

TWO_BRANCH_SOURCE = "u := h(); if p(w) { v := f(u); } else { v := g(); }"

FAITHFUL_LOOP_SOURCE = """
while p(w) {
    w := g(w);
    v := f(u);
    if q(w, t) { u := h(u); }
    t := H(t);
}
"""

FAITHFUL_LOOP_ITERATION = "p:T g f q:T h H"

TWO_MINIMA_SOURCE = """
while P(v) {
    if Q(v) {
        if q(v) {
            x := g_good();
            v := G_good(x, v);
        } else {
            x := g_bad();
            v := G_bad(x, v);
        }
        if s_1(v) { x := g_1(); }
        if s_2(v) { x := g_2(); }
        if t(x) { v := H(v); }
    }
    v := J(v);
}
"""

TWO_MINIMA_PATH = " ".join(
    [
        "P:T Q:T q:T g_good G_good s_1:F s_2:F t:T H J",
        "P:T Q:T q:T g_good G_good s_1:T g_1 s_2:F t:T H J",
        "P:T Q:T q:T g_good G_good s_1:F s_2:T g_2 t:T H J",
        "P:T Q:T q:F g_bad G_bad s_1:T g_1 s_2:T g_2 t:T H J",
        "P:T Q:F J",
        "P:F",
    ]
)

END = "end"


def faithful_loop_schema(label: str = END) -> Schema:
    return append_label(parse_schema(FAITHFUL_LOOP_SOURCE).schema, label)


def faithful_loop_path(iterations: int = 2) -> Path:
    """Criterion path of ``iterations`` passes through the loop body, then exit."""
    schema = faithful_loop_schema()
    return parse_path(" ".join([FAITHFUL_LOOP_ITERATION] * iterations + ["p:F"]), schema)


def two_minima_schema(label: str = END) -> Schema:
    return append_label(parse_schema(TWO_MINIMA_SOURCE).schema, label)


class Expectation(NamedTuple):
    """An expected checker verdict on a named quotient."""

    description: str
    quotient: Schema
    mode: str
    accepted: bool


@dataclass(frozen=True)
class WorkedExample:
    """A worked example.

    Attributes:
        name: Fixture name.
        schema: The schema (with the criterion label when there is one).
        paths: Criterion path first, then any further paths of interest.
        variables: Criterion variables.
        label: Criterion label, or None for fixtures without slicing.
        expectations: Checker verdicts on specific quotients.
        final_terms: Rendered final terms after the first path.
        exists: Expected non-trivial slice existence per mode name.
        min_minimal_pfds: Lower bound on the number of minimal path-faithful slices.
    """

    name: str
    schema: Schema
    paths: Tuple[Path, ...]
    variables: Tuple[str, ...] = ()
    label: Optional[str] = None
    expectations: Tuple[Expectation, ...] = ()
    final_terms: Tuple[Tuple[str, str], ...] = ()
    exists: Tuple[Tuple[str, bool], ...] = ()
    min_minimal_pfds: int = 0

    def criterion(self, store: Optional[TermStore] = None) -> SliceCriterion:
        if self.label is None:
            raise ValueError(f"fixture {self.name} has no slicing criterion")
        return SliceCriterion.build(self.schema, self.paths[0], self.variables, self.label, store)


def _two_branch() -> WorkedExample:
    schema = parse_schema(TWO_BRANCH_SOURCE).schema
    return WorkedExample(
        "two_branch",
        schema,
        (parse_path("h p:T f", schema), parse_path("h p:F g", schema)),
        variables=("v",),
        final_terms=(("v", "f(h())"), ("u", "h()"), ("w", "w")),
    )


def _faithful_loop() -> WorkedExample:
    schema = faithful_loop_schema()
    return WorkedExample(
        "faithful_loop",
        schema,
        (faithful_loop_path(2),),
        variables=("v",),
        label=END,
        expectations=(
            Expectation("S", schema, "pfds", True),
            Expectation("S without H", delete_symbols(schema, ["H"]), "pfds", False),
            Expectation("S without H", delete_symbols(schema, ["H"]), "ds", True),
            Expectation("S without g", delete_symbols(schema, ["g"]), "pfds", False),
            Expectation("S without f", delete_symbols(schema, ["f"]), "ds", False),
        ),
        final_terms=(("v", "f(h(u))"), ("u", "h(h(u))")),
        exists=(("pfds", False), ("ds", True)),
    )


def _sat_gadget() -> WorkedExample:
    formula = Cnf3.from_ints(1, [(1, 1, 1)])
    instance = gen_3sat(formula, END)
    valuation = brute_force_sat(formula).valuation or {1: True}
    return WorkedExample(
        "sat_gadget",
        instance.schema,
        (instance.path,),
        variables=(instance.variable,),
        label=instance.label,
        expectations=(
            Expectation("delta quotient", delta_quotient(instance, valuation), "pfds", True),
            Expectation("delta quotient", delta_quotient(instance, valuation), "ds", True),
        ),
        exists=(("pfds", True), ("ds", True)),
    )


def _two_minima() -> WorkedExample:
    schema = two_minima_schema()
    return WorkedExample(
        "two_minima",
        schema,
        (parse_path(TWO_MINIMA_PATH, schema),),
        variables=("v",),
        label=END,
        expectations=(
            Expectation("S1 (s_2 deleted)", delete_symbols(schema, ["s_2"]), "pfds", True),
            Expectation("S2 (s_1 deleted)", delete_symbols(schema, ["s_1"]), "pfds", True),
            Expectation("s_1 and s_2 deleted", delete_symbols(schema, ["s_1", "s_2"]), "pfds", False),
            Expectation("s_1 and s_2 deleted", delete_symbols(schema, ["s_1", "s_2"]), "ds", False),
        ),
        min_minimal_pfds=2,
    )


_BUILDERS: Dict[str, Callable[[], WorkedExample]] = {
    "two_branch": _two_branch,
    "faithful_loop": _faithful_loop,
    "sat_gadget": _sat_gadget,
    "two_minima": _two_minima,
}


def worked_examples() -> Dict[str, WorkedExample]:
    """Return every fixture by name."""
    return {name: build() for name, build in _BUILDERS.items()}


class FixtureCheck(NamedTuple):
    """Outcome of one expectation."""

    fixture: str
    check: str
    passed: bool
    detail: str = ""


_CHECKERS = {"pfds": check_pfds, "ds": check_ds, "pfds-definitional": check_pfds_definitional}


def run_fixture(fixture: WorkedExample, store: Optional[TermStore] = None) -> List[FixtureCheck]:
    """Check every expectation of ``fixture``."""
    results: List[FixtureCheck] = []
    for path in fixture.paths:
        if fixture.label is not None:
            path = path + (LabelLetter(fixture.label),)
        kind = validate_path(fixture.schema, path).kind
        check = f"path {print_path(path)} is terminal"
        results.append(FixtureCheck(fixture.name, check, kind is PathKind.TERMINAL, kind.value))
    if fixture.final_terms:
        state = run_predicate_free(fixture.paths[0], store=store)
        for variable, expected in fixture.final_terms:
            found = state.render(variable)
            results.append(FixtureCheck(fixture.name, f"{variable} = {expected}", found == expected, found))
    if fixture.label is None:
        return results

    criterion = fixture.criterion(store)
    for expectation in fixture.expectations:
        verdict = _CHECKERS[expectation.mode](criterion, expectation.quotient)
        outcome = "accepts" if expectation.accepted else "rejects"
        check = f"{expectation.mode} {outcome} {expectation.description}"
        results.append(
            FixtureCheck(
                fixture.name, check, verdict.accepted == expectation.accepted, verdict.verdict_line()
            )
        )
    for mode_name, expected in fixture.exists:
        report = find_slices(criterion, SliceMode(mode_name), SearchGoal.EXISTS)
        results.append(
            FixtureCheck(
                fixture.name,
                f"non-trivial {mode_name} slice {'exists' if expected else 'does not exist'}",
                report.exists == expected,
                f"checked {report.checked}",
            )
        )
    if fixture.min_minimal_pfds:
        report = find_slices(criterion, SliceMode.PFDS, SearchGoal.MINIMAL)
        count = len(report.minimal)
        results.append(
            FixtureCheck(
                fixture.name,
                f"at least {fixture.min_minimal_pfds} minimal pfds slices",
                count >= fixture.min_minimal_pfds,
                f"found {count}",
            )
        )
    failed = sum(1 for r in results if not r.passed)
    if failed:
        _logger.warning("Fixture %s: %d of %d checks failed", fixture.name, failed, len(results))
    return results


__all__ = [
    "Expectation",
    "FixtureCheck",
    "WorkedExample",
    "faithful_loop_path",
    "faithful_loop_schema",
    "run_fixture",
    "two_minima_schema",
    "worked_examples",
]
