# coding: utf-8
"""Tests for the term store and Herbrand path semantics."""

import threading

import pytest

from src.core.errors import InvalidPathError, SchliceError
from src.herbrand.engine import (
    Consequence,
    HerbrandState,
    are_compatible,
    check_consistent,
    consequences,
    final_term,
    format_consequence,
    is_executable,
    run_predicate_free,
)
from src.herbrand.terms import App, TermStore, VarLeaf
from src.schema.parser import parse_path, parse_schema


class TestTermStore:
    """Tests for hash-consed terms."""

    def test_structural_equality_is_id_equality(self) -> None:
        """Test that equal structures intern to one id."""
        store = TermStore()
        first = store.app("f", [store.app("h", [])])
        second = store.app("f", [store.app("h", [])])
        assert first == second
        assert len(store) == 2

    def test_render(self) -> None:
        """Test prefix rendering with variables and constants."""
        store = TermStore()
        term = store.app("G", [store.app("g", []), store.var("v")])
        assert store.render(term) == "G(g(),v)"
        assert store.node(term) == App("G", (store.app("g", []), store.var("v")))
        assert store.node(store.var("v")) == VarLeaf("v")

    def test_unknown_child_is_refused(self) -> None:
        """Test that children must already be interned."""
        with pytest.raises(ValueError, match="unknown child"):
            TermStore().app("f", [5])

    def test_shared_dag_stays_small(self) -> None:
        """Test that doubling terms grow the store linearly."""
        store = TermStore()
        term = store.var("x")
        for _ in range(200):
            term = store.app("d", [term, term])
        assert len(store) == 201
        assert store.depth(term, "d") == 200
        assert store.symbols_of(term) == {"d"}

    def test_symbols_and_depth(self) -> None:
        """Test function-symbol sets and nesting depth."""
        store = TermStore()
        h = store.app("H", [store.app("H", [store.var("v")])])
        term = store.app("F", [store.app("g", []), h])
        assert store.symbols_of(term) == {"F", "g", "H"}
        assert store.depth(term, "H") == 2
        assert store.depth(term, "q") == 0

    def test_concurrent_interning_agrees(self) -> None:
        """Test that threads interning the same term get one id."""
        store = TermStore()
        results = []

        def worker() -> None:
            term = store.var("x")
            for _ in range(50):
                term = store.app("s", [term])
            results.append(term)

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        assert len(set(results)) == 1
        assert len(store) == 51


class TestExecution:
    """Tests for predicate-free execution."""

    def test_two_branch_final_term(self, two_branch_schema) -> None:
        """Test that h p:T f leaves v = f(h())."""
        store = TermStore()
        path = parse_path("h p:T f", two_branch_schema)
        assert store.render(final_term(two_branch_schema, path, "v", store)) == "f(h())"

    def test_other_branch(self, two_branch_schema) -> None:
        """Test that the false branch leaves v = g()."""
        state = run_predicate_free(parse_path("h p:F g", two_branch_schema), store=TermStore())
        assert state.render("v") == "g()"
        assert state.render("w") == "w"
        assert state.bound_variables() == ("u", "v")

    def test_self_binding_is_unbound(self) -> None:
        """Test that binding a variable to itself gives an equal state with an equal hash."""
        store = TermStore()
        bound = HerbrandState(store, {"u": store.var("u")})
        empty = HerbrandState(store)
        assert bound == empty
        assert hash(bound) == hash(empty)
        assert bound.bound_variables() == ()
        assert len({bound, empty}) == 1

    def test_loop_terms(self, faithful_loop) -> None:
        """Test the terms built by two loop iterations."""
        _, path = faithful_loop
        state = run_predicate_free(path, store=TermStore())
        assert state.render("v") == "f(h(u))"
        assert state.render("u") == "h(h(u))"
        assert state.render("w") == "g(g(w))"

    def test_predicate_free_schema_runs(self) -> None:
        """Test that a schema without predicates executes as its own path."""
        schema = parse_schema("x := f(y); y := g(x); label end;").schema
        assert run_predicate_free(schema, store=TermStore()).render("y") == "g(f(y))"

    def test_schema_with_predicates_is_refused(self, two_branch_schema) -> None:
        """Test that a schema with an if cannot be run directly."""
        with pytest.raises(SchliceError, match="predicate-free"):
            run_predicate_free(two_branch_schema)

    def test_final_term_validates_path(self, two_branch_schema) -> None:
        """Test that an illegal path is reported with its position."""
        with pytest.raises(InvalidPathError) as info:
            final_term(two_branch_schema, parse_path("h f", two_branch_schema), "v")
        assert info.value.position == 2

    def test_states_compare_by_terms(self) -> None:
        """Test state equality and the natural-state convention."""
        store = TermStore()
        natural = HerbrandState(store)
        assert natural == HerbrandState(store)
        assert natural.assign("x", "f", ()) == HerbrandState(store).assign("x", "f", ())
        assert natural.assign("x", "f", ()) != natural


class TestConsequences:
    """Tests for consequences, executability and compatibility."""

    def test_consequences_in_path_order(self, faithful_loop) -> None:
        """Test one consequence per predicate letter with evaluated terms."""
        schema, path = faithful_loop
        store = TermStore()
        found = [format_consequence(c, store) for c in consequences(schema, path, store)]
        assert found == [
            "p(w)=T",
            "q(g(w),t)=T",
            "p(g(w))=T",
            "q(g(g(w)),H(t))=T",
            "p(g(g(w)))=F",
        ]

    def test_repeated_term_must_agree(self) -> None:
        """Test that a loop test on an unchanged term cannot change value."""
        schema = parse_schema("while p(x) { y := f(y); }").schema
        store = TermStore()
        assert is_executable(schema, parse_path("p:T f p:T f p:F", schema), store).ok is False
        assert is_executable(schema, parse_path("p:F", schema), store)

    def test_clash_is_described(self) -> None:
        """Test that an inconsistent consequence set names the clashing term."""
        store = TermStore()
        x = store.var("x")
        feasibility = check_consistent([Consequence("p", (x,), True), Consequence("p", (x,), False)])
        assert not feasibility
        assert feasibility.describe(store) == "p(x) forced both ways"

    def test_compatibility_across_schemas(self, two_branch_schema) -> None:
        """Test that two paths forcing p(w) differently are incompatible."""
        store = TermStore()
        other = parse_schema("if p(w) { x := k(); }").schema
        true_path = parse_path("h p:T f", two_branch_schema)
        assert are_compatible(two_branch_schema, true_path, other, parse_path("p:T k", other), store)
        assert not are_compatible(two_branch_schema, true_path, other, parse_path("p:F", other), store)
