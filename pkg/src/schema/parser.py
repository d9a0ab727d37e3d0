# coding: utf-8
"""Concrete syntax for schemas, paths and slicing criteria.

Schema grammar::

    schema    := statement*
    statement := "skip" ";"
               | "label" NAME ";"
               | NAME ":=" NAME "(" names? ")" ";"
               | "if" NAME "(" names? ")" block ("else" block)?
               | "while" NAME "(" names? ")" block
    block     := "{" schema "}"
    names     := NAME ("," NAME)*

An else-less ``if`` has a Skip false part. Names use ASCII letters, digits,
``_`` and ``'``. ``#`` starts a comment running to the end of the line.

Path text is a whitespace-separated list of tokens: ``f`` for the
assignment to function ``f``, ``p:T`` / ``p:F`` for predicate letters and
``@L`` for labels. Linearity makes each token name exactly one letter.

Files use the extensions ``.schema``, ``.path`` and ``.criterion``
(``key=value`` lines: ``label=``, ``vars=``, ``path=``); all are UTF-8.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Dict, Iterable, List, Optional, Tuple

from src.core.errors import PathSyntaxError, SchemaSyntaxError
from src.schema.model import (
    SKIP,
    Assign,
    If,
    Label,
    Letter,
    LinearityReport,
    Path,
    Schema,
    Skip,
    SymbolTable,
    While,
    alphabet,
    check_linear,
    iter_statements,
    seq,
    statements,
    with_sites,
)

_logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<assign>:=)
  | (?P<punct>[(){};,])
  | (?P<name>[A-Za-z0-9_']+)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"skip", "label", "if", "else", "while"}
_NAME_RE = re.compile(r"^[A-Za-z0-9_']+$")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        column = position - line_start + 1
        if match is None:
            raise SchemaSyntaxError(f"unexpected character {text[position]!r}", line, column)
        kind = match.lastgroup or ""
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind not in ("ws", "comment"):
            tokens.append(_Token(kind, match.group(), line, column))
        position = match.end()
    tokens.append(_Token("eof", "", line, position - line_start + 1))
    return tokens


@dataclass
class ParsedSchema:
    """A parsed schema with its inferred symbol table.

    Attributes:
        schema: The schema in canonical form with address site-ids.
        symbols: Inferred symbol table.
        linearity: Linearity report (non-linear input is allowed but logged).
        spans: Site-id to (line, column) of the statement's first token.
    """

    schema: Schema
    symbols: SymbolTable
    linearity: LinearityReport
    spans: Dict[str, Tuple[int, int]] = field(default_factory=dict)


class _SchemaParser:
    """Recursive-descent parser over the token list."""

    def __init__(self, text: str):
        self._tokens = _tokenize(text)
        self._index = 0
        # Spans are recorded against statements in source order; sites are
        # assigned afterwards in the same pre-order.
        self._starts: List[Tuple[int, int]] = []

    def _peek(self) -> _Token:
        return self._tokens[self._index]

    def _next(self) -> _Token:
        token = self._tokens[self._index]
        self._index += 1
        return token

    def _expect(self, text: str) -> _Token:
        token = self._next()
        if token.text != text:
            found = token.text or "end of input"
            raise SchemaSyntaxError(f"expected {text!r}, found {found!r}", token.line, token.column)
        return token

    def _name(self, what: str) -> str:
        token = self._next()
        if token.kind != "name" or token.text in _KEYWORDS:
            found = token.text or "end of input"
            raise SchemaSyntaxError(f"expected {what}, found {found!r}", token.line, token.column)
        return token.text

    def _names(self) -> Tuple[str, ...]:
        self._expect("(")
        names: List[str] = []
        if self._peek().text != ")":
            names.append(self._name("variable"))
            while self._peek().text == ",":
                self._next()
                names.append(self._name("variable"))
        self._expect(")")
        return tuple(names)

    def parse(self) -> Schema:
        result = self._sequence(top_level=True)
        token = self._peek()
        if token.kind != "eof":
            raise SchemaSyntaxError(f"unexpected {token.text!r}", token.line, token.column)
        return result

    def _sequence(self, top_level: bool = False) -> Schema:
        items: List[Schema] = []
        while True:
            token = self._peek()
            if token.kind == "eof" or (not top_level and token.text == "}"):
                return seq(*items)
            items.append(self._statement())

    def _block(self) -> Schema:
        self._expect("{")
        body = self._sequence()
        self._expect("}")
        return body

    def _statement(self) -> Schema:
        token = self._peek()
        if token.text == "skip":
            self._next()
            self._expect(";")
            return SKIP
        self._starts.append((token.line, token.column))
        if token.text == "label":
            self._next()
            name = self._name("label name")
            self._expect(";")
            return Label(name)
        if token.text == "if":
            self._next()
            predicate = self._name("predicate symbol")
            args = self._names()
            then_part = self._block()
            else_part: Schema = SKIP
            if self._peek().text == "else":
                self._next()
                else_part = self._block()
            return If(predicate, args, then_part, else_part)
        if token.text == "while":
            self._next()
            predicate = self._name("predicate symbol")
            args = self._names()
            return While(predicate, args, self._block())
        target = self._name("statement")
        self._expect(":=")
        function = self._name("function symbol")
        args = self._names()
        self._expect(";")
        return Assign(target, function, args)

    @property
    def starts(self) -> List[Tuple[int, int]]:
        return self._starts


def parse_schema(text: str) -> ParsedSchema:
    """Parse schema source text.

    Raises:
        SchemaSyntaxError: On malformed input (with line and column).
        ArityConflictError: If a symbol is used with two arities.
        SymbolClashError: If a name is used in two namespaces.
    """
    parser = _SchemaParser(text)
    schema = with_sites(parser.parse())
    symbols = SymbolTable.infer(schema)
    linearity = check_linear(schema)
    if not linearity.ok:
        _logger.warning("Schema is not linear; repeated symbols: %s", ", ".join(linearity.repeated))
    # Pre-order of statements equals source order of their first tokens.
    spans = {
        stmt.site: start for stmt, start in zip(iter_statements(schema), parser.starts)
    }
    return ParsedSchema(schema, symbols, linearity, spans)


def load_schema(path: FilePath) -> ParsedSchema:
    """Parse a ``.schema`` file."""
    return parse_schema(FilePath(path).read_text(encoding="utf-8"))


# =========================================================================
# Printing
# =========================================================================


def _format_call(name: str, args: Iterable[str]) -> str:
    return f"{name}({', '.join(args)})"


def _print_lines(schema: Schema, indent: int, out: List[str]) -> None:
    pad = "    " * indent
    if isinstance(schema, Skip):
        out.append(f"{pad}skip;")
        return
    for stmt in statements(schema):
        if isinstance(stmt, Label):
            out.append(f"{pad}label {stmt.name};")
        elif isinstance(stmt, Assign):
            out.append(f"{pad}{stmt.target} := {_format_call(stmt.function, stmt.args)};")
        elif isinstance(stmt, If):
            out.append(f"{pad}if {_format_call(stmt.predicate, stmt.args)} {{")
            _print_lines(stmt.then_part, indent + 1, out)
            if isinstance(stmt.else_part, Skip):
                out.append(f"{pad}}}")
            else:
                out.append(f"{pad}}} else {{")
                _print_lines(stmt.else_part, indent + 1, out)
                out.append(f"{pad}}}")
        elif isinstance(stmt, While):
            out.append(f"{pad}while {_format_call(stmt.predicate, stmt.args)} {{")
            _print_lines(stmt.body, indent + 1, out)
            out.append(f"{pad}}}")


def print_schema(schema: Schema) -> str:
    """Render ``schema`` as source text that parses back to an equal schema."""
    lines: List[str] = []
    _print_lines(schema, 0, lines)
    return "\n".join(lines) + "\n"


def format_schema_inline(schema: Schema) -> str:
    """Render ``schema`` on one line (used in log messages and reports)."""
    return " ".join(line.strip() for line in print_schema(schema).splitlines())


def print_path(path: Path) -> str:
    """Render a path as space-separated tokens."""
    return " ".join(letter.token for letter in path)


# =========================================================================
# Paths
# =========================================================================


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def parse_path(text: str, schema: Schema) -> Path:
    """Resolve path text against the alphabet of a linear schema.

    Raises:
        NonLinearSchemaError: If ``schema`` is not linear.
        PathSyntaxError: On malformed tokens or names absent from ``schema``.
    """
    letters = alphabet(schema)
    by_token: Dict[str, Letter] = {letter.token: letter for letter in letters}
    path: List[Letter] = []
    for token in _strip_comments(text).split():
        letter = by_token.get(token)
        if letter is None:
            if token.startswith("@"):
                problem = f"label {token[1:]!r} does not occur in the schema"
            elif ":" in token:
                name, _, branch = token.rpartition(":")
                if branch not in ("T", "F") or not _NAME_RE.match(name):
                    problem = f"malformed predicate token {token!r}"
                else:
                    problem = f"predicate {name!r} does not occur in the schema"
            elif _NAME_RE.match(token):
                problem = f"function {token!r} does not occur in the schema"
            else:
                problem = f"malformed token {token!r}"
            raise PathSyntaxError(f"{problem} (token {len(path) + 1})")
        path.append(letter)
    return tuple(path)


def load_path(path: FilePath, schema: Schema) -> Path:
    """Parse a ``.path`` file against ``schema``."""
    return parse_path(FilePath(path).read_text(encoding="utf-8"), schema)


@dataclass(frozen=True)
class CriterionFile:
    """Contents of a ``.criterion`` sidecar.

    Attributes:
        label: Criterion label.
        variables: Criterion variable names.
        path_text: Optional inline criterion path.
    """

    label: str
    variables: Tuple[str, ...]
    path_text: Optional[str] = None


def parse_criterion(text: str) -> CriterionFile:
    """Parse ``key=value`` criterion lines.

    Raises:
        PathSyntaxError: If ``label`` or ``vars`` is missing or a line is malformed.
    """
    values: Dict[str, str] = {}
    for number, raw in enumerate(_strip_comments(text).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise PathSyntaxError(f"criterion line {number} is not key=value: {raw!r}")
        values[key.strip()] = value.strip()
    if "label" not in values or "vars" not in values:
        raise PathSyntaxError("criterion needs both label= and vars=")
    variables = tuple(v for v in re.split(r"[\s,]+", values["vars"]) if v)
    return CriterionFile(values["label"], variables, values.get("path"))


def print_criterion(criterion: CriterionFile) -> str:
    lines = [f"label={criterion.label}", f"vars={','.join(criterion.variables)}"]
    if criterion.path_text is not None:
        lines.append(f"path={criterion.path_text}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CriterionFile",
    "ParsedSchema",
    "format_schema_inline",
    "load_path",
    "load_schema",
    "parse_criterion",
    "parse_path",
    "parse_schema",
    "print_criterion",
    "print_path",
    "print_schema",
]
