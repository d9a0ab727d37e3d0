# coding: utf-8
"""3-CNF formulas, simplified DIMACS, and two small SAT deciders.

A literal is a (variable index, polarity) pair with indices counted from 1.
brute_force_sat evaluates the whole truth table at once with numpy;
second_opinion_sat splits on variables recursively over the clauses in
reverse order. They share no code past the Cnf3 model, so agreement between
them is a meaningful check.

DIMACS input accepts ``c`` comment lines, one ``p cnf n m`` header, and
clauses of three non-zero signed integers terminated by ``0``.
"""

import logging
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import CnfFormatError, SatBudgetExceeded
from src.core.settings import Settings

_logger = logging.getLogger(__name__)


class Literal(NamedTuple):
    """Variable ``index`` (1-based), positive when ``positive`` is True."""

    index: int
    positive: bool = True

    def to_int(self) -> int:
        return self.index if self.positive else -self.index

    @classmethod
    def from_int(cls, value: int) -> "Literal":
        if value == 0:
            raise CnfFormatError("literal 0 is the clause terminator, not a literal")
        return cls(abs(value), value > 0)


Clause = Tuple[Literal, Literal, Literal]


@dataclass(frozen=True)
class Cnf3:
    """A 3-CNF formula over variables ``1..variables``.

    Literals may repeat inside a clause.

    Raises:
        CnfFormatError: On construction, if a clause does not have exactly
            three literals or a literal index is outside ``1..variables``.
    """

    variables: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self) -> None:
        if self.variables < 1:
            raise CnfFormatError("a formula needs at least one variable")
        for number, clause in enumerate(self.clauses, start=1):
            if len(clause) != 3:
                raise CnfFormatError(f"clause {number} has {len(clause)} literals, expected 3")
            for literal in clause:
                if not 1 <= literal.index <= self.variables:
                    raise CnfFormatError(
                        f"clause {number} uses variable {literal.index} outside 1..{self.variables}"
                    )

    @classmethod
    def from_ints(cls, variables: int, clauses: Sequence[Sequence[int]]) -> "Cnf3":
        """Build from signed-integer clauses, e.g. ``Cnf3.from_ints(2, [(1, -2, 2)])``."""
        converted = tuple(tuple(Literal.from_int(v) for v in c) for c in clauses)
        return cls(variables, converted)  # type: ignore

    def satisfied_by(self, valuation: Dict[int, bool]) -> bool:
        """Evaluate under ``valuation`` (variable index to truth value)."""
        return all(any(valuation[lit.index] == lit.positive for lit in clause) for clause in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variables} {len(self.clauses)}"]
        for clause in self.clauses:
            lines.append(" ".join(str(lit.to_int()) for lit in clause) + " 0")
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Cnf3:
    """Parse simplified DIMACS text.

    Raises:
        CnfFormatError: On a missing or malformed header, a clause that is not
            three literals, or a clause count that disagrees with the header.
    """
    header: Optional[Tuple[int, int]] = None
    pending: List[int] = []
    clauses: List[List[int]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise CnfFormatError(f"line {number}: malformed header {raw!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as e:
                raise CnfFormatError(f"line {number}: malformed header {raw!r}") from e
            continue
        if header is None:
            raise CnfFormatError(f"line {number}: clause before the 'p cnf' header")
        for token in line.split():
            try:
                value = int(token)
            except ValueError as e:
                raise CnfFormatError(f"line {number}: {token!r} is not an integer") from e
            if value == 0:
                if len(pending) != 3:
                    raise CnfFormatError(f"line {number}: clause has {len(pending)} literals, expected 3")
                clauses.append(pending)
                pending = []
            else:
                pending.append(value)
    if header is None:
        raise CnfFormatError("missing 'p cnf' header")
    if pending:
        raise CnfFormatError("last clause is not terminated by 0")
    variables, expected = header
    if expected != len(clauses):
        raise CnfFormatError(f"header announces {expected} clauses, found {len(clauses)}")
    return Cnf3.from_ints(variables, clauses)


def load_dimacs(path: FilePath) -> Cnf3:
    return parse_dimacs(FilePath(path).read_text(encoding="utf-8"))


class SatResult(NamedTuple):
    """Satisfiability verdict with a witness valuation when satisfiable."""

    satisfiable: bool
    valuation: Optional[Dict[int, bool]] = None

    def __bool__(self) -> bool:
        return self.satisfiable


def _check_budget(formula: Cnf3, limit: Optional[int]) -> None:
    bound = Settings.satMaxVariables if limit is None else limit
    if formula.variables > bound:
        raise SatBudgetExceeded(f"{formula.variables} variables exceed the brute-force limit of {bound}")


def brute_force_sat(formula: Cnf3, limit: Optional[int] = None) -> SatResult:
    """Decide satisfiability by evaluating every valuation.

    Valuations are enumerated as the binary numbers ``0..2**n - 1`` with
    variable 1 as the most significant bit, so the witness is the first
    satisfying valuation in that order (all-false first).

    Raises:
        SatBudgetExceeded: If the formula has more than ``limit`` variables
            (default Settings.satMaxVariables).
    """
    _check_budget(formula, limit)
    n = formula.variables
    rows = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    table = ((rows[:, None] >> shifts[None, :]) & 1).astype(bool)
    satisfied = np.ones(2**n, dtype=bool)
    for clause in formula.clauses:
        clause_value = np.zeros(2**n, dtype=bool)
        for literal in clause:
            column = table[:, literal.index - 1]
            clause_value |= column if literal.positive else ~column
        satisfied &= clause_value
    hits = np.flatnonzero(satisfied)
    _logger.debug("%d of %d valuations satisfy %d clauses", hits.size, 2**n, len(formula.clauses))
    if hits.size == 0:
        return SatResult(False)
    row = table[int(hits[0])]
    return SatResult(True, {i + 1: bool(row[i]) for i in range(n)})


def second_opinion_sat(formula: Cnf3, limit: Optional[int] = None) -> SatResult:
    """Decide satisfiability by recursive splitting over reversed clauses.

    Raises:
        SatBudgetExceeded: As for brute_force_sat.
    """
    _check_budget(formula, limit)
    clauses = [frozenset(lit.to_int() for lit in clause) for clause in reversed(formula.clauses)]
    valuation = _split(clauses, {})
    if valuation is None:
        return SatResult(False)
    for index in range(1, formula.variables + 1):
        valuation.setdefault(index, False)
    return SatResult(True, valuation)


def _split(clauses: List[FrozenSet[int]], chosen: Dict[int, bool]) -> Optional[Dict[int, bool]]:
    if not clauses:
        return dict(chosen)
    if any(not clause for clause in clauses):
        return None
    variable = max(abs(lit) for lit in clauses[0])
    for value in (True, False):
        literal = variable if value else -variable
        reduced = [clause - {-literal} for clause in clauses if literal not in clause]
        chosen[variable] = value
        found = _split(reduced, chosen)
        del chosen[variable]
        if found is not None:
            return found
    return None


__all__ = [
    "Cnf3",
    "Literal",
    "SatResult",
    "brute_force_sat",
    "load_dimacs",
    "parse_dimacs",
    "second_opinion_sat",
]
