# coding: utf-8
"""Tests for 3-CNF input, the hardness gadget, the round trip and the worked examples."""

import random

import pytest

from src.core.errors import CnfFormatError, SatBudgetExceeded, SymbolClashError
from src.core.settings import Settings
from src.gadgets.cnf import Cnf3, Literal, brute_force_sat, load_dimacs, parse_dimacs, second_opinion_sat
from src.gadgets.corpus import run_fixture, worked_examples
from src.gadgets.roundtrip import (
    random_formula,
    random_formulas,
    round_trip,
    round_trip_batch,
    small_formulas,
)
from src.gadgets.sat_reduction import (
    check_gadget_facts,
    delta_quotient,
    gadget_schema,
    gen_3sat,
    literal_function,
    write_gadget,
)
from src.herbrand.terms import DEFAULT_STORE, TermStore
from src.schema.model import If, While, check_linear, iter_statements, symbols
from src.schema.parser import parse_criterion, parse_path, parse_schema, print_path, print_schema
from src.slicing.checkers import check_ds, check_pfds

SAT_ONE = Cnf3.from_ints(1, [(1, 1, 1)])
UNSAT_ONE = Cnf3.from_ints(1, [(1, 1, 1), (-1, -1, -1)])


class TestCnf:
    """Tests for the formula model, DIMACS and the two deciders."""

    def test_parse_dimacs(self) -> None:
        """Test comments, header and multi-line clauses."""
        formula = parse_dimacs("c example\np cnf 2 2\n1 -2 2 0\n-1\n-1 -2 0\n")
        assert formula.variables == 2
        assert formula.clauses[0] == (Literal(1), Literal(2, False), Literal(2))
        assert parse_dimacs(formula.to_dimacs()) == formula

    @pytest.mark.parametrize(
        "text, message",
        [
            ("1 1 1 0\n", "before the 'p cnf' header"),
            ("p cnf 1\n", "malformed header"),
            ("p cnf 1 2\n1 1 1 0\n", "announces 2 clauses"),
            ("p cnf 1 1\n1 1 0\n", "has 2 literals"),
            ("p cnf 1 1\n1 1 1\n", "not terminated"),
            ("p cnf 1 1\n1 x 1 0\n", "not an integer"),
            ("p cnf 1 1\n1 2 1 0\n", "outside 1..1"),
            ("c nothing\n", "missing"),
        ],
    )
    def test_dimacs_errors(self, text: str, message: str) -> None:
        """Test that malformed DIMACS is refused with a reason."""
        with pytest.raises(CnfFormatError, match=message):
            parse_dimacs(text)

    def test_load_dimacs(self, tmp_path) -> None:
        """Test reading a formula file."""
        source = tmp_path / "f.cnf"
        source.write_text(SAT_ONE.to_dimacs(), encoding="utf-8")
        assert load_dimacs(source) == SAT_ONE

    def test_brute_force_witness_order(self) -> None:
        """Test that the first satisfying valuation in binary order is returned."""
        assert brute_force_sat(SAT_ONE).valuation == {1: True}
        assert brute_force_sat(Cnf3.from_ints(2, [(-1, -1, -2)])).valuation == {1: False, 2: False}
        assert not brute_force_sat(UNSAT_ONE)

    def test_deciders_agree(self) -> None:
        """Test the two deciders against each other on random formulas."""
        rng = random.Random(11)
        for _ in range(200):
            formula = random_formula(rng, rng.randint(1, 5), rng.randint(1, 12))
            first = brute_force_sat(formula)
            second = second_opinion_sat(formula)
            assert first.satisfiable == second.satisfiable, formula.to_dimacs()
            if first:
                assert formula.satisfied_by(first.valuation)
                assert formula.satisfied_by(second.valuation)

    def test_variable_limit(self) -> None:
        """Test that brute force refuses formulas over the variable limit."""
        with pytest.raises(SatBudgetExceeded, match="limit of 0"):
            brute_force_sat(SAT_ONE, limit=0)


class TestGadget:
    """Tests for the hardness gadget."""

    def test_gadget_is_linear(self) -> None:
        """Test that the generated schema uses every symbol once."""
        assert check_linear(gadget_schema(3))

    def test_predicate_count(self) -> None:
        """Test the number of predicates for one variable."""
        predicates = [s for s in iter_statements(gadget_schema(1)) if isinstance(s, (If, While))]
        assert len(predicates) == 10

    @pytest.mark.parametrize(
        "variables, clauses, entries",
        [(1, [(1, 1, 1)], 8), (2, [(1, -2, 2)], 23), (3, [(1, 2, 3), (-1, -2, -3)], 51)],
    )
    def test_loop_entries(self, variables: int, clauses, entries: int) -> None:
        """Test that the path enters the loop 4 + 3n + 6n(n-1) + m times."""
        instance = gen_3sat(Cnf3.from_ints(variables, clauses))
        assert instance.loop_entries == entries == instance.expected_loop_entries

    def test_segment_order(self) -> None:
        """Test the order of iteration types along the path."""
        instance = gen_3sat(Cnf3.from_ints(2, [(1, -2, 2)]))
        kinds = [s.kind for s in instance.segments]
        assert kinds[:4] == ["0.1", "0.2", "0.3", "1"]
        assert kinds[4:10] == ["2", "2", "2'", "2'", "3", "3"]
        assert kinds[10:13] == ["4.1", "4.2", "4.3"]
        assert kinds[-1] == "5"
        assert instance.segments[10].detail == (1, 2)

    def test_path_ends_by_leaving_the_loop(self) -> None:
        """Test that the criterion path stops at the loop exit."""
        instance = gen_3sat(SAT_ONE)
        assert print_path(instance.full_path).endswith("p:F @end")

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_gadget_facts(self, seed: int) -> None:
        """Test the structural facts on random formulas."""
        rng = random.Random(seed)
        formula = random_formula(rng, rng.randint(1, 3), rng.randint(1, 4))
        facts = check_gadget_facts(gen_3sat(formula), TermStore())
        assert facts.ok, facts.failures

    def test_literal_functions_stay_out_of_v(self) -> None:
        """Test that the final term of v holds no literal function."""
        instance = gen_3sat(Cnf3.from_ints(2, [(1, 2, -1)]))
        criterion = instance.criterion(TermStore())
        found = criterion.store.symbols_of(criterion.reference_terms["v"])
        assert not found & {literal_function(i, p) for i in (1, 2) for p in (True, False)}

    def test_configured_criterion_variable(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that the gadget is built around Settings.criterionVariable."""
        monkeypatch.setattr(Settings, "criterionVariable", "w")
        instance = gen_3sat(SAT_ONE)
        assert instance.variable == "w"
        text = print_schema(instance.schema)
        assert "w := H(w);" in text and "v :=" not in text
        assert check_gadget_facts(instance, TermStore()).ok
        criterion = instance.criterion(TermStore())
        assert check_pfds(criterion, delta_quotient(instance, {1: True}))

    def test_explicit_variable_wins(self) -> None:
        """Test that an explicit variable overrides the configured one."""
        assert gen_3sat(SAT_ONE, variable="u").variable == "u"

    @pytest.mark.parametrize("variable", ["x", "b"])
    def test_working_variable_is_refused(self, variable: str) -> None:
        """Test that the gadget's own working variables cannot be the criterion variable."""
        with pytest.raises(SymbolClashError, match="working variables"):
            gen_3sat(SAT_ONE, variable=variable)

    def test_delta_quotient_is_a_slice(self) -> None:
        """Test that the quotient chosen by a satisfying valuation is accepted by both checkers."""
        formula = Cnf3.from_ints(2, [(1, 2, 2), (-1, 2, 2)])
        instance = gen_3sat(formula)
        valuation = brute_force_sat(formula).valuation
        quotient = delta_quotient(instance, valuation)
        assert "q_2'" not in symbols(quotient)
        criterion = instance.criterion(TermStore())
        assert check_pfds(criterion, quotient)
        assert check_ds(criterion, quotient)

    def test_write_gadget(self, tmp_path) -> None:
        """Test that written files parse back to the same instance."""
        instance = gen_3sat(SAT_ONE)
        schema_file, path_file, criterion_file = write_gadget(instance, tmp_path / "out", "one")
        assert schema_file.name == "one.schema"
        schema = parse_schema(schema_file.read_text(encoding="utf-8")).schema
        assert schema == instance.schema
        assert parse_path(path_file.read_text(encoding="utf-8"), schema) == instance.full_path
        criterion = parse_criterion(criterion_file.read_text(encoding="utf-8"))
        assert (criterion.label, criterion.variables) == ("end", ("v",))


class TestRoundTrip:
    """Tests for the satisfiability round trip."""

    def test_satisfiable_formula(self) -> None:
        """Test that a satisfiable formula gives non-trivial slices of both kinds."""
        report = round_trip(SAT_ONE)
        assert report.satisfiable and report.pfds_exists and report.ds_exists
        assert report.witness_verified is True
        assert report.agrees
        assert report.summary() == "n=1 m=1 sat=true pfds=true ds=true witness=true agree"

    def test_unsatisfiable_formula(self) -> None:
        """Test that an unsatisfiable formula gives only trivial slices."""
        report = round_trip(UNSAT_ONE)
        assert not report.satisfiable
        assert not report.pfds_exists
        assert not report.ds_exists
        assert report.witness_verified is None
        assert report.agrees

    def test_round_trips_leave_the_shared_store_alone(self) -> None:
        """Test that round trips intern their terms into a private store."""
        before = len(DEFAULT_STORE)
        reports = round_trip_batch([SAT_ONE, UNSAT_ONE, Cnf3.from_ints(2, [(1, -2, 2)])])
        assert all(r.agrees for r in reports)
        assert len(DEFAULT_STORE) == before

    def test_batch_keeps_order(self) -> None:
        """Test that threaded batches report in input order."""
        formulas = [SAT_ONE, UNSAT_ONE]
        reports = round_trip_batch(formulas, workers=2)
        assert [r.formula for r in reports] == formulas
        assert all(r.agrees for r in reports)

    def test_random_batch_agrees(self) -> None:
        """Test that slice existence matches satisfiability on random formulas up to n=3, m=4."""
        formulas = list(random_formulas(50, seed=7, max_variables=3, max_clauses=4))
        assert max(f.variables for f in formulas) == 3
        reports = round_trip_batch(formulas)
        assert all(r.agrees for r in reports), [r.summary() for r in reports if not r.agrees]

    def test_small_formula_classes(self) -> None:
        """Test the number of symmetry classes and that each class appears once."""
        assert [f.clauses for f in small_formulas(1, 1)] == [
            Cnf3.from_ints(1, [(1, -1, -1)]).clauses,
            Cnf3.from_ints(1, [(-1, -1, -1)]).clauses,
        ]
        assert len(list(small_formulas(1, 4))) == 37
        # (1, 1, 1) and (-1, -1, -1) are one class
        assert len(list(small_formulas(1, 2))) == 8
        pairs = list(small_formulas(2, 2))
        assert len(pairs) == len(set(pairs))

    def test_exhaustive_small_formulas_agree(self) -> None:
        """Test that slice existence matches satisfiability on every small formula class."""
        formulas = list(small_formulas(1, 4)) + list(small_formulas(2, 3))
        assert len(formulas) >= 200
        assert any(not brute_force_sat(f).satisfiable for f in formulas)
        reports = round_trip_batch(formulas)
        assert all(r.agrees for r in reports), [r.summary() for r in reports if not r.agrees]

    def test_random_formulas_are_reproducible(self) -> None:
        """Test that the same seed gives the same formulas."""
        first = list(random_formulas(6, seed=5, max_variables=2, max_clauses=3))
        assert first == list(random_formulas(6, seed=5, max_variables=2, max_clauses=3))
        assert all(f.variables <= 2 and len(f.clauses) <= 3 for f in first)


class TestWorkedExamples:
    """Tests for the worked-example corpus."""

    def test_names(self) -> None:
        """Test the fixture names."""
        assert sorted(worked_examples()) == ["faithful_loop", "sat_gadget", "two_branch", "two_minima"]

    @pytest.mark.parametrize("name", ["two_branch", "faithful_loop", "sat_gadget", "two_minima"])
    def test_fixture_passes(self, name: str) -> None:
        """Test that every expectation of a worked example holds."""
        results = run_fixture(worked_examples()[name], TermStore())
        failed = [r for r in results if not r.passed]
        assert results
        assert not failed, failed

    def test_fixture_without_label_has_no_criterion(self) -> None:
        """Test that asking a label-less example for a criterion fails."""
        with pytest.raises(ValueError, match="no slicing criterion"):
            worked_examples()["two_branch"].criterion()
