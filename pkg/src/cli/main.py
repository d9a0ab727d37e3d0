# coding: utf-8
"""Command-line front end.

Usage::

    python schlice.py check --schema S.schema
    python schlice.py paths --schema S.schema --max-len 8
    python schlice.py exec --schema S.schema --path "h p:T f" --vars v
    python schlice.py project --schema S.schema --quotient Q.schema --path P.path
    python schlice.py check-pfds --schema S.schema --path P.path --vars v --label end \
        --quotient Q.schema
    python schlice.py check-ds ...same flags as check-pfds...
    python schlice.py find-slices --schema S.schema --path P.path --vars v --label end \
        --mode ds --want minimal
    python schlice.py gen-3sat --cnf F.cnf --out DIR
    python schlice.py round-trip --cnf F.cnf | --random N --seed S
    python schlice.py corpus
    python schlice.py scaling --ks 10 100 1000

Exit status is 0 when the command completes with an accepting or true
verdict, 1 when it completes with a rejecting or false one, and 2 on usage
or input errors (one diagnostic line on stderr).

``--path`` takes inline path text or the name of a ``.path`` file;
``--criterion`` names a sidecar supplying ``label``, ``vars`` and optionally
``path``. When both an inline path and a file path are given, the inline
one is used and a warning is logged.

Output is ``human`` (default, from config) or ``machine``: stable,
line-oriented ``key=value`` records meant for diffing.
"""

import argparse
import logging
import os
import sys
from pathlib import Path as FilePath
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.core.errors import SchliceError
from src.core.settings import ConfigurationError, Settings
from src.gadgets.cnf import load_dimacs
from src.gadgets.corpus import run_fixture, worked_examples
from src.gadgets.roundtrip import random_formulas, round_trip_batch
from src.gadgets.sat_reduction import check_gadget_facts, gen_3sat, write_gadget
from src.herbrand.engine import check_consistent, consequences, format_consequence, run_predicate_free
from src.herbrand.terms import TermStore
from src.paths.cursor import enumerate_paths, project, walk
from src.schema.model import Path, Schema, count_quotients, is_quotient, sites, symbols
from src.schema.parser import (
    CriterionFile,
    load_schema,
    parse_criterion,
    parse_path,
    print_path,
    print_schema,
)
from src.slicing.checkers import SliceCriterion, check_ds, check_pfds, check_pfds_definitional
from src.slicing.scaling import measure_pfds_scaling
from src.slicing.search import SearchGoal, SliceMode, find_slices

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_ERROR = 2


class _Printer:
    """Writes human or machine lines to stdout."""

    def __init__(self, fmt: str):
        self.machine = fmt == "machine"

    def line(self, human: str, machine: Optional[str] = None) -> None:
        if self.machine:
            if machine is not None:
                print(machine)
        else:
            print(human)

    def both(self, text: str) -> None:
        print(text)


# =========================================================================
# Input resolution
# =========================================================================


def _require(args: argparse.Namespace, name: str) -> str:
    value = getattr(args, name, None)
    if not value:
        raise SchliceError(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def _load_schema(args: argparse.Namespace, name: str = "schema") -> Schema:
    return load_schema(FilePath(_require(args, name))).schema


def _criterion_file(args: argparse.Namespace) -> Optional[CriterionFile]:
    if not getattr(args, "criterion", None):
        return None
    return parse_criterion(FilePath(args.criterion).read_text(encoding="utf-8"))


def _path_text(args: argparse.Namespace, sidecar: Optional[CriterionFile]) -> str:
    """Pick the path text.

    An inline path wins over a path file, and either flag wins over the
    ``path=`` line of a criterion sidecar. Every overridden source is
    reported with a warning.
    """
    inline: Optional[str] = None
    from_file: Optional[str] = None
    if args.path:
        if os.path.isfile(args.path):
            from_file = FilePath(args.path).read_text(encoding="utf-8")
        else:
            inline = args.path
    if getattr(args, "path_file", None):
        from_file = FilePath(args.path_file).read_text(encoding="utf-8")
    if inline is not None and from_file is not None:
        _logger.warning("Both an inline path and a path file were given; using the inline path")
    text = inline if inline is not None else from_file
    if sidecar is not None and sidecar.path_text is not None:
        if text is None:
            text = sidecar.path_text
        else:
            _logger.warning(
                "The criterion file %s also gives a path; using the one from the command line",
                args.criterion,
            )
    if text is None:
        raise SchliceError(f"a path is required for {args.command} (--path or --path-file)")
    return text


def _load_path(args: argparse.Namespace, schema: Schema, sidecar: Optional[CriterionFile] = None) -> Path:
    return parse_path(_path_text(args, sidecar), schema)


def _variables(args: argparse.Namespace, sidecar: Optional[CriterionFile]) -> Tuple[str, ...]:
    if args.vars:
        return tuple(v for v in args.vars.replace(",", " ").split() if v)
    if sidecar is not None:
        return sidecar.variables
    return ()


def _build_criterion(args: argparse.Namespace, schema: Schema) -> SliceCriterion:
    sidecar = _criterion_file(args)
    variables = _variables(args, sidecar)
    if not variables:
        raise SchliceError("criterion variables are required (--vars or --criterion)")
    label = args.label or (sidecar.label if sidecar is not None else None) or Settings.endLabel
    path = _load_path(args, schema, sidecar)
    return SliceCriterion.build(schema, path, variables, label, TermStore())


# =========================================================================
# Commands
# =========================================================================


def _cmd_check(args: argparse.Namespace, out: _Printer) -> int:
    parsed = load_schema(FilePath(_require(args, "schema")))
    schema = parsed.schema
    linear = parsed.linearity.ok
    statements = len(sites(schema))
    out.line(
        f"Schema: {statements} statements, {len(parsed.symbols.functions)} functions, "
        f"{len(parsed.symbols.predicates)} predicates, {count_quotients(schema)} quotients",
        f"statements={statements} quotients={count_quotients(schema)}",
    )
    if linear:
        out.line("Schema is linear", "linear=true")
        return EXIT_OK
    repeated = ",".join(parsed.linearity.repeated)
    out.line(f"Schema is NOT linear; repeated symbols: {repeated}", f"linear=false repeated={repeated}")
    return EXIT_FALSE


def _cmd_paths(args: argparse.Namespace, out: _Printer) -> int:
    schema = _load_schema(args)
    max_len = Settings.defaultMaxLen if args.max_len is None else args.max_len
    total = terminal = 0
    for found in enumerate_paths(schema, max_len):
        total += 1
        terminal += found.terminal
        tokens = print_path(found.path)
        kind = "terminal" if found.terminal else "prefix"
        marker = "  [terminal]" if found.terminal else ""
        out.line(f"{tokens or '(empty)'}{marker}", f"{kind} {tokens}".rstrip())
    out.line(
        f"{total} paths up to length {max_len}, {terminal} terminal",
        f"count={total} terminal={terminal}",
    )
    return EXIT_OK


def _cmd_exec(args: argparse.Namespace, out: _Printer) -> int:
    schema = _load_schema(args)
    sidecar = _criterion_file(args)
    path = _load_path(args, schema, sidecar)
    store = TermStore()
    walk(schema, path)
    state = run_predicate_free(path, store=store)
    variables = _variables(args, sidecar) or state.bound_variables()
    for variable in variables:
        out.both(f"{variable} = {state.render(variable)}")
    facts = consequences(schema, path, store)
    for fact in facts:
        rendered = format_consequence(fact, store)
        out.line(f"  consequence {rendered}", f"consequence {rendered}")
    feasibility = check_consistent(facts)
    if feasibility:
        out.line("Path is executable", "executable=true")
        return EXIT_OK
    detail = feasibility.describe(store)
    out.line(f"Path is NOT executable: {detail}", f"executable=false detail={detail}")
    return EXIT_FALSE


def _cmd_project(args: argparse.Namespace, out: _Printer) -> int:
    schema = _load_schema(args)
    quotient = _load_schema(args, "quotient")
    path = _load_path(args, schema, _criterion_file(args))
    walk(schema, path)
    projected = project(quotient, path, schema)
    match = is_quotient(quotient, schema)
    out.line(f"Projection ({len(match.deleted)} statements deleted):", None)
    out.both(print_path(projected))
    return EXIT_OK


_CHECKERS: Dict[str, Callable] = {
    "check-pfds": check_pfds,
    "check-ds": check_ds,
}


def _cmd_check_slice(args: argparse.Namespace, out: _Printer) -> int:
    schema = _load_schema(args)
    quotient = _load_schema(args, "quotient")
    criterion = _build_criterion(args, schema)
    checker = _CHECKERS[args.command]
    if args.command == "check-pfds" and args.definitional:
        checker = check_pfds_definitional
    verdict = checker(criterion, quotient)
    out.both(verdict.verdict_line())
    for line in verdict.describe():
        out.line(f"  {line}", line)
    return EXIT_OK if verdict.accepted else EXIT_FALSE


def _cmd_find_slices(args: argparse.Namespace, out: _Printer) -> int:
    schema = _load_schema(args)
    criterion = _build_criterion(args, schema)
    report = find_slices(
        criterion, SliceMode(args.mode), SearchGoal(args.want), budget=args.budget, workers=args.workers
    )
    out.line(
        f"Checked {report.checked} quotients over {report.free_sites} free sites",
        f"checked={report.checked} free={report.free_sites}",
    )
    if report.want is SearchGoal.MINIMAL:
        count = len(report.minimal)
        out.line(f"{count} minimal {report.mode.value} slice(s):", f"minimal={count}")
        for retained in report.minimal_symbol_sets():
            out.line(f"  {{{', '.join(retained)}}}", f"slice {','.join(retained)}")
    elif report.witness is not None:
        out.line("Non-trivial slice:", None)
        out.line(print_schema(report.witness).rstrip(), f"slice {','.join(sorted(symbols(report.witness)))}")
    out.both(f"exists={str(report.exists).lower()}")
    return EXIT_OK if report.exists else EXIT_FALSE


def _cmd_gen_3sat(args: argparse.Namespace, out: _Printer) -> int:
    cnf_file = FilePath(_require(args, "cnf"))
    formula = load_dimacs(cnf_file)
    instance = gen_3sat(formula, args.label or Settings.endLabel)
    facts = check_gadget_facts(instance)
    if args.out:
        written = write_gadget(instance, FilePath(args.out), cnf_file.stem)
        for path in written:
            out.line(f"wrote {path}", f"wrote {path}")
    else:
        out.both(print_schema(instance.schema).rstrip())
        out.both(print_path(instance.full_path))
    out.line(
        f"{instance.loop_entries} loop entries (expected {instance.expected_loop_entries}), "
        f"{len(instance.path)} letters",
        f"entries={instance.loop_entries} letters={len(instance.path)}",
    )
    for failure in facts.failures:
        out.both(f"FACT FAILED {failure}")
    return EXIT_OK if facts else EXIT_FALSE


def _cmd_round_trip(args: argparse.Namespace, out: _Printer) -> int:
    if args.cnf:
        formulas = [load_dimacs(FilePath(args.cnf))]
    elif args.random:
        formulas = list(random_formulas(args.random, args.seed, args.max_vars, args.max_clauses))
    else:
        raise SchliceError("round-trip needs --cnf or --random N")
    reports = round_trip_batch(formulas, budget=args.budget, workers=args.workers or 1)
    for report in reports:
        out.both(report.summary())
    agreed = sum(1 for r in reports if r.agrees)
    out.line(f"{agreed}/{len(reports)} formulas agree", f"agree={agreed} total={len(reports)}")
    return EXIT_OK if agreed == len(reports) else EXIT_FALSE


def _cmd_corpus(args: argparse.Namespace, out: _Printer) -> int:
    fixtures = worked_examples()
    names = args.names or list(fixtures)
    unknown = [n for n in names if n not in fixtures]
    if unknown:
        raise SchliceError(f"unknown fixture(s): {', '.join(unknown)}")
    failed = 0
    for name in names:
        for result in run_fixture(fixtures[name], TermStore()):
            failed += not result.passed
            status = "PASS" if result.passed else "FAIL"
            out.line(
                f"{status} {result.fixture}: {result.check} ({result.detail})",
                f"{status} {result.fixture} {result.check}",
            )
    return EXIT_OK if failed == 0 else EXIT_FALSE


def _cmd_scaling(args: argparse.Namespace, out: _Printer) -> int:
    report = measure_pfds_scaling(tuple(args.ks))
    for line in report.lines():
        out.both(line)
    return EXIT_OK if report.exponent < 2.5 else EXIT_FALSE


_COMMANDS: Dict[str, Callable[[argparse.Namespace, _Printer], int]] = {
    "check": _cmd_check,
    "paths": _cmd_paths,
    "exec": _cmd_exec,
    "project": _cmd_project,
    "check-pfds": _cmd_check_slice,
    "check-ds": _cmd_check_slice,
    "find-slices": _cmd_find_slices,
    "gen-3sat": _cmd_gen_3sat,
    "round-trip": _cmd_round_trip,
    "corpus": _cmd_corpus,
    "scaling": _cmd_scaling,
}


# =========================================================================
# Argument parsing
# =========================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "machine"], default=None, help="Output format.")
    common.add_argument("--log-level", default=None, help="Logging level (default from config).")
    common.add_argument("--budget", type=int, default=None, help="Free-site limit for lattice searches.")
    common.add_argument("--workers", type=int, default=None, help="Checker threads for searches.")

    schema_flags = argparse.ArgumentParser(add_help=False)
    schema_flags.add_argument("--schema", help="Schema file.")

    path_flags = argparse.ArgumentParser(add_help=False)
    path_flags.add_argument("--path", help="Inline path text or a .path file.")
    path_flags.add_argument("--path-file", help="Path file (an inline --path wins).")
    path_flags.add_argument("--vars", help="Criterion variables, comma separated.")
    path_flags.add_argument("--label", help="Criterion label.")
    path_flags.add_argument("--criterion", help="Criterion sidecar file (label=, vars=, path=).")

    parser = argparse.ArgumentParser(prog="schlice", description="Dynamic slicing of linear program schemas.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("check", parents=[common, schema_flags], help="Parse a schema and check linearity.")
    paths = sub.add_parser("paths", parents=[common, schema_flags], help="Enumerate paths.")
    paths.add_argument("--max-len", type=int, default=None)
    sub.add_parser("exec", parents=[common, schema_flags, path_flags], help="Execute a path.")
    with_path = [common, schema_flags, path_flags]
    project_cmd = sub.add_parser("project", parents=with_path, help="Project a path.")
    project_cmd.add_argument("--quotient", help="Quotient schema file.")
    for name in ("check-pfds", "check-ds"):
        checker = sub.add_parser(name, parents=with_path, help="Check a candidate slice.")
        checker.add_argument("--quotient", help="Candidate slice schema file.")
        checker.add_argument("--definitional", action="store_true", help=argparse.SUPPRESS)
    find = sub.add_parser("find-slices", parents=with_path, help="Search for slices.")
    find.add_argument("--mode", choices=[m.value for m in SliceMode], default=SliceMode.PFDS.value)
    find.add_argument("--want", choices=[g.value for g in SearchGoal], default=SearchGoal.EXISTS.value)
    gen = sub.add_parser("gen-3sat", parents=[common], help="Generate the 3SAT gadget for a DIMACS file.")
    gen.add_argument("--cnf", help="DIMACS file.")
    gen.add_argument("--out", help="Output directory for .schema/.path/.criterion files.")
    gen.add_argument("--label", default=None)
    trip = sub.add_parser("round-trip", parents=[common], help="Compare SAT with slice existence.")
    trip.add_argument("--cnf", help="DIMACS file.")
    trip.add_argument("--random", type=int, default=0, help="Number of random formulas.")
    trip.add_argument("--seed", type=int, default=0)
    trip.add_argument("--max-vars", type=int, default=3)
    trip.add_argument("--max-clauses", type=int, default=4)
    corpus = sub.add_parser("corpus", parents=[common], help="Run the worked-example fixtures.")
    corpus.add_argument("names", nargs="*", help="Fixture names (default: all).")
    scaling = sub.add_parser(
        "scaling", parents=[common], help="Time path-faithful checking on unrolled loops."
    )
    scaling.add_argument("--ks", type=int, nargs="+", default=[10, 100, 1000])
    return parser


def _configure_logging(level_name: Optional[str]) -> None:
    name = (level_name or Settings.logLevel).upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        raise ConfigurationError(f"unknown log level {level_name!r}")
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    try:
        _configure_logging(args.log_level)
        Settings.apply_environment()
        if args.budget is not None and args.budget < 0:
            raise ConfigurationError("--budget must be non-negative")
        out = _Printer(args.format or Settings.outputFormat)
        return _COMMANDS[args.command](args, out)
    except (SchliceError, ConfigurationError, OSError, ValueError) as e:
        print(f"schlice: error: {e}", file=sys.stderr)
        return EXIT_ERROR


__all__: List[str] = ["build_parser", "main"]
