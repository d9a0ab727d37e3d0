# coding: utf-8
"""Tests for the schema model and its text formats."""

import random

import pytest

from src.core.errors import (
    ArityConflictError,
    NonLinearSchemaError,
    PathSyntaxError,
    SchemaSyntaxError,
    SymbolClashError,
)
from src.schema.model import (
    SKIP,
    Assign,
    AssignLetter,
    If,
    LabelLetter,
    PredLetter,
    Seq,
    alphabet,
    append_label,
    assign,
    check_linear,
    count_quotients,
    delete_symbols,
    enumerate_quotients,
    if_,
    is_quotient,
    quotient_from_sites,
    required_closure,
    seq,
    sites,
    symbols,
    while_,
    with_sites,
)
from src.schema.parser import (
    CriterionFile,
    load_schema,
    parse_criterion,
    parse_path,
    parse_schema,
    print_criterion,
    print_path,
    print_schema,
)
from tests.conftest import random_linear_schema


class TestCanonicalForm:
    """Tests for sequence canonicalisation and site-ids."""

    def test_seq_flattens_and_drops_skip(self) -> None:
        """Test that nested sequences flatten and Skip disappears."""
        a, b, c = assign("x", "f"), assign("y", "g"), assign("z", "h")
        assert seq(a, SKIP, seq(b, c)) == Seq((a, b, c))
        assert seq(SKIP, SKIP) is SKIP
        assert seq(SKIP, a) == a

    def test_sites_are_addresses(self, two_branch_schema) -> None:
        """Test that site-ids follow the position of each statement."""
        assert sites(two_branch_schema) == ["0", "1", "1.T.0", "1.F.0"]

    def test_builders_equal_parser_output(self, two_branch_schema) -> None:
        """Test that a schema built with helpers equals the parsed one."""
        built = with_sites(
            seq(assign("u", "h"), if_("p", ["w"], assign("v", "f", "u"), assign("v", "g")))
        )
        assert built == two_branch_schema
        assert sites(built) == sites(two_branch_schema)

    def test_site_ids_do_not_affect_equality(self) -> None:
        """Test that two statements differing only in site-id compare equal."""
        assert Assign("x", "f", (), "0") == Assign("x", "f", (), "3.T.1")


class TestLinearity:
    """Tests for linearity and the alphabet."""

    def test_linear_schema(self, two_branch_schema) -> None:
        """Test that the two-branch example is linear."""
        assert check_linear(two_branch_schema)

    def test_repeated_function_is_reported(self) -> None:
        """Test that a function used twice makes the schema non-linear."""
        report = check_linear(parse_schema("x := f(); y := f();").schema)
        assert not report
        assert report.repeated == ("f",)

    def test_alphabet_requires_linearity(self) -> None:
        """Test that the alphabet of a non-linear schema is refused."""
        with pytest.raises(NonLinearSchemaError, match="f"):
            alphabet(parse_schema("x := f(); y := f();").schema)

    def test_alphabet_letters(self, two_branch_schema) -> None:
        """Test that every statement contributes its letters."""
        assert alphabet(two_branch_schema) == {
            AssignLetter("u", "h"),
            AssignLetter("v", "f", ("u",)),
            AssignLetter("v", "g"),
            PredLetter("p", ("w",), True),
            PredLetter("p", ("w",), False),
        }


class TestQuotients:
    """Tests for quotient recognition, enumeration and construction."""

    def test_two_branch_has_ten_quotients(self, two_branch_schema) -> None:
        """Test the quotient count of the two-branch example."""
        assert count_quotients(two_branch_schema) == 10
        assert len(list(enumerate_quotients(two_branch_schema))) == 10

    def test_enumeration_starts_with_schema(self, two_branch_schema) -> None:
        """Test that the schema itself is the first quotient."""
        assert next(enumerate_quotients(two_branch_schema)) == two_branch_schema

    def test_ascending_enumeration_ends_with_schema(self, two_branch_schema) -> None:
        """Test that ascending order ends with the full schema and starts with skip."""
        ordered = list(enumerate_quotients(two_branch_schema, ascending=True))
        assert ordered[0] is SKIP
        assert ordered[-1] == two_branch_schema

    def test_enumerated_quotients_are_distinct_quotients(self) -> None:
        """Test that enumeration yields each quotient once and all are quotients."""
        rng = random.Random(7)
        for _ in range(25):
            schema = random_linear_schema(rng, max_nodes=7)
            found = list(enumerate_quotients(schema))
            assert len(found) == count_quotients(schema)
            assert len(set(found)) == len(found)
            assert all(is_quotient(q, schema) for q in found)

    def test_must_contain_fixes_ancestors(self, two_branch_schema) -> None:
        """Test that a required nested site keeps its enclosing if."""
        assert required_closure(two_branch_schema, ["1.T.0"]) == {"1", "1.T.0"}
        kept = list(enumerate_quotients(two_branch_schema, ["1.T.0"]))
        assert len(kept) == 4
        assert all("f" in symbols(q) and "p" in symbols(q) for q in kept)

    def test_not_a_quotient(self, two_branch_schema) -> None:
        """Test that reordered or foreign statements are not quotients."""
        swapped = parse_schema("if p(w) { v := f(u); } else { v := g(); } u := h();").schema
        foreign = parse_schema("u := k();").schema
        assert not is_quotient(swapped, two_branch_schema)
        assert not is_quotient(foreign, two_branch_schema)

    def test_quotient_match_reports_deleted_sites(self, two_branch_schema) -> None:
        """Test that a successful match lists the dropped statements."""
        quotient = parse_schema("if p(w) { v := f(u); }").schema
        match = is_quotient(quotient, two_branch_schema)
        assert match
        assert match.deleted == {"0", "1.F.0"}

    def test_deleting_an_if_deletes_its_parts(self, two_branch_schema) -> None:
        """Test that deleting a predicate symbol removes the whole if."""
        assert delete_symbols(two_branch_schema, ["p"]) == parse_schema("u := h();").schema
        assert quotient_from_sites(two_branch_schema, ["0", "1.T.0"]) == parse_schema("u := h();").schema

    def test_append_label(self) -> None:
        """Test that append_label adds a final label statement."""
        schema = append_label(with_sites(while_("p", ["x"], assign("x", "f", "x"))), "end")
        assert print_schema(schema).splitlines()[-1] == "label end;"


class TestParser:
    """Tests for schema, path and criterion text."""

    def test_print_then_parse_is_identity(self, faithful_loop) -> None:
        """Test that printed schemas parse back to equal schemas."""
        schema, _ = faithful_loop
        assert parse_schema(print_schema(schema)).schema == schema

    def test_else_less_if_has_skip_else(self) -> None:
        """Test that an if without else gets a Skip false part."""
        schema = parse_schema("if q(x) { y := g(); }").schema
        assert isinstance(schema, If)
        assert schema.else_part is SKIP

    def test_comments_and_skip(self) -> None:
        """Test that comments are ignored and skip statements vanish."""
        parsed = parse_schema("# header\nskip;\nx := f(); # trailing\n")
        assert parsed.schema == assign("x", "f")

    def test_syntax_error_position(self) -> None:
        """Test that syntax errors carry line and column."""
        with pytest.raises(SchemaSyntaxError) as info:
            parse_schema("x := f();\ny := ;")
        assert info.value.line == 2
        assert info.value.column == 6

    def test_unclosed_block(self) -> None:
        """Test that a missing closing brace is reported."""
        with pytest.raises(SchemaSyntaxError, match="expected '}'"):
            parse_schema("while p(x) { x := f(x);")

    def test_arity_conflict(self) -> None:
        """Test that one symbol with two arities is refused."""
        with pytest.raises(ArityConflictError, match="'f'"):
            parse_schema("x := f(a); y := f(a, b);")

    def test_symbol_clash(self) -> None:
        """Test that a name used as function and predicate is refused."""
        with pytest.raises(SymbolClashError, match="function and predicate"):
            parse_schema("x := p(); if p(x) { y := g(); }")

    def test_non_linear_schema_parses_with_report(self) -> None:
        """Test that non-linear input parses and reports its repeated symbols."""
        parsed = parse_schema("x := f(); if q(x) { y := f(); }")
        assert parsed.linearity.repeated == ("f",)

    def test_spans_record_statement_starts(self) -> None:
        """Test that each site maps to the position of its first token."""
        parsed = parse_schema("x := f();\nif q(x) {\n  y := g();\n}")
        assert parsed.spans == {"0": (1, 1), "1": (2, 1), "1.T.0": (3, 3)}

    def test_parse_path_tokens(self, two_branch_schema) -> None:
        """Test that path tokens resolve to letters."""
        path = parse_path("h p:T f", two_branch_schema)
        assert path == (
            AssignLetter("u", "h"),
            PredLetter("p", ("w",), True),
            AssignLetter("v", "f", ("u",)),
        )
        assert print_path(path) == "h p:T f"

    def test_parse_path_label_token(self, loop_schema) -> None:
        """Test that @name resolves to a label letter."""
        assert parse_path("p:F @end", loop_schema)[-1] == LabelLetter("end")

    @pytest.mark.parametrize(
        "text, message",
        [
            ("h k", "function 'k'"),
            ("h r:T", "predicate 'r'"),
            ("h p:X", "malformed predicate token"),
            ("@nowhere", "label 'nowhere'"),
        ],
    )
    def test_parse_path_errors(self, two_branch_schema, text: str, message: str) -> None:
        """Test that unknown or malformed tokens are refused."""
        with pytest.raises(PathSyntaxError, match=message):
            parse_path(text, two_branch_schema)

    def test_criterion_file(self) -> None:
        """Test that criterion sidecars parse and print."""
        criterion = parse_criterion("# gadget\nlabel=end\nvars=v, w\npath=p:F\n")
        assert criterion == CriterionFile("end", ("v", "w"), "p:F")
        assert parse_criterion(print_criterion(criterion)) == criterion

    def test_criterion_file_requires_label_and_vars(self) -> None:
        """Test that incomplete criterion sidecars are refused."""
        with pytest.raises(PathSyntaxError, match="label= and vars="):
            parse_criterion("label=end\n")

    def test_load_schema(self, tmp_path) -> None:
        """Test that schema files are read as UTF-8 source."""
        source = tmp_path / "s.schema"
        source.write_text("u := h();\nlabel end;\n", encoding="utf-8")
        assert symbols(load_schema(source).schema) == {"h", "end"}
