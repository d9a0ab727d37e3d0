# coding: utf-8
"""Shared fixtures: worked-example schemas and a seeded random schema generator."""

import random
from typing import Iterator, List, Optional, Tuple

import pytest

from src.gadgets.corpus import faithful_loop_path, faithful_loop_schema
from src.herbrand.engine import HerbrandState
from src.herbrand.terms import TermStore
from src.paths.cursor import PathCursor
from src.schema.model import (
    Letter,
    Path,
    PredLetter,
    Schema,
    append_label,
    assign,
    if_,
    seq,
    while_,
    with_sites,
)
from src.schema.parser import parse_path, parse_schema

VARIABLES = ("u", "v", "w")


class _Names:
    def __init__(self) -> None:
        self.functions = 0
        self.predicates = 0

    def function(self) -> str:
        self.functions += 1
        return f"f{self.functions}"

    def predicate(self) -> str:
        self.predicates += 1
        return f"p{self.predicates}"


def _random_block(rng: random.Random, names: _Names, budget: List[int], depth: int) -> Schema:
    items: List[Schema] = []
    for _ in range(rng.randint(1, 3)):
        if budget[0] <= 0:
            break
        budget[0] -= 1
        roll = rng.random()
        args = tuple(rng.sample(VARIABLES, rng.randint(0, 2)))
        if depth < 2 and roll < 0.2:
            items.append(while_(names.predicate(), args, _random_block(rng, names, budget, depth + 1)))
        elif depth < 2 and roll < 0.45:
            predicate = names.predicate()
            then_part = _random_block(rng, names, budget, depth + 1)
            else_part = _random_block(rng, names, budget, depth + 1) if rng.random() < 0.4 else seq()
            items.append(if_(predicate, args, then_part, else_part))
        else:
            items.append(assign(rng.choice(VARIABLES), names.function(), *args))
    return seq(*items)


def random_linear_schema(
    rng: random.Random, max_nodes: int = 12, label: Optional[str] = "end"
) -> Schema:
    """Draw a linear schema with at most ``max_nodes`` statements before the end label.

    With ``label`` None the schema has no label, so paths may end inside an if.
    """
    budget = [max_nodes]
    body = _random_block(rng, _Names(), budget, 0)
    if label is None:
        return with_sites(body)
    return append_label(with_sites(body), label)


def random_executable_path(rng: random.Random, schema: Schema, max_len: int = 20) -> Optional[Path]:
    """Walk ``schema`` to a terminal cursor along an executable path.

    Predicate terms seen before are given their earlier branch; undecided ones
    are chosen at random, with the false branch forced once the path reaches
    ``max_len``. Returns None if the walk would exceed twice ``max_len``.
    """
    store = TermStore()
    cursor = PathCursor.start(schema)
    state = HerbrandState(store)
    known = {}
    path: List[Letter] = []
    while not cursor.terminal:
        if len(path) > 2 * max_len:
            return None
        letters = cursor.next_letters()
        letter = letters[0]
        if isinstance(letter, PredLetter):
            key = (letter.predicate, state.evaluate(letter))
            branch = known.get(key)
            if branch is None:
                branch = False if len(path) >= max_len else rng.random() < 0.6
                known[key] = branch
            letter = letters[0] if letters[0].branch == branch else letters[1]
        state, _ = state.step(letter)
        cursor = cursor.advance(letter)
        path.append(letter)
    return tuple(path)


def random_population(
    seed: int, count: int, max_nodes: int = 12, max_len: int = 20, unlabelled: float = 0.0
) -> Iterator[Tuple[Schema, Path]]:
    """Yield ``count`` (schema, terminal executable path) pairs.

    A share ``unlabelled`` of the schemas is drawn without the end label.
    """
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        label = None if rng.random() < unlabelled else "end"
        schema = random_linear_schema(rng, max_nodes, label)
        path = random_executable_path(rng, schema, max_len)
        if path is None:
            continue
        produced += 1
        yield schema, path


TWO_BRANCH = "u := h(); if p(w) { v := f(u); } else { v := g(); }"


@pytest.fixture
def two_branch_schema() -> Schema:
    return parse_schema(TWO_BRANCH).schema


@pytest.fixture
def faithful_loop() -> Tuple[Schema, Path]:
    return faithful_loop_schema(), faithful_loop_path(2)


@pytest.fixture
def loop_schema() -> Schema:
    """A loop whose body holds an else-less if."""
    return parse_schema("while p(x) { x := f(x); if q(x) { y := g(y); } } label end;").schema


@pytest.fixture
def loop_path(loop_schema: Schema) -> Path:
    return parse_path("p:T f q:T g p:T f q:F p:F @end", loop_schema)


@pytest.fixture(scope="session")
def random_pairs() -> List[Tuple[Schema, Path]]:
    """A reproducible population of random labelled schemas with executable terminal paths."""
    return list(random_population(seed=20240601, count=500))


@pytest.fixture(scope="session")
def reduction_pairs() -> List[Tuple[Schema, Path]]:
    """A larger population, half of it without the end label."""
    return list(random_population(seed=20240717, count=1000, unlabelled=0.5))
