# coding: utf-8
"""Lattice search over quotients for slices.

Two questions are answered for a criterion: does a non-trivial slice exist,
and what are the minimal slices under symbol-set inclusion. Sites that every
slice must keep (the criterion label, the functions of the final criterion
terms, and everything enclosing them) are fixed first; the remaining free
sites must fit in the configured budget.

Existence runs largest quotients first. Minimality runs smallest first, one
size level at a time, and skips any quotient containing an accepted one, so
every accepted quotient it sees is minimal.

Thread Safety:
    With Settings.searchWorkers > 1 the quotients of a batch are checked on
    a ThreadPoolExecutor. executor.map keeps enumeration order, so reports
    do not depend on the worker count. Term interning is locked (see
    src/herbrand/terms.py).
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.core.errors import SearchBudgetExceeded
from src.core.settings import Settings
from src.schema.model import Schema, enumerate_quotients, required_closure, sites, symbols
from src.slicing.checkers import SliceCriterion, SliceVerdict, check_ds, check_pfds

_logger = logging.getLogger(__name__)


class SliceMode(Enum):
    """Slice notion checked by a search."""

    PFDS = "pfds"
    DS = "ds"

    @property
    def checker(self) -> Callable[[SliceCriterion, Schema], SliceVerdict]:
        return check_pfds if self is SliceMode.PFDS else check_ds


class SearchGoal(Enum):
    """What a search reports."""

    EXISTS = "exists"
    MINIMAL = "minimal"


@dataclass(frozen=True)
class SliceSearchReport:
    """Result of find_slices.

    Attributes:
        mode: Slice notion.
        want: Search goal.
        exists: True if a non-trivial slice exists (EXISTS) or, for MINIMAL,
            if some minimal slice differs from the schema.
        witness: A non-trivial slice, when one was found.
        minimal: Minimal slices (MINIMAL only), ordered by retained symbols.
        checked: Number of quotients handed to the checker.
        free_sites: Number of sites the search was free to delete.
    """

    mode: SliceMode
    want: SearchGoal
    exists: bool
    witness: Optional[Schema] = None
    minimal: Tuple[Schema, ...] = ()
    checked: int = 0
    free_sites: int = 0

    def minimal_symbol_sets(self) -> List[Tuple[str, ...]]:
        """Retained-symbol sets of the minimal slices, each sorted, in sorted order."""
        return sorted(tuple(sorted(symbols(q))) for q in self.minimal)


def search_space(criterion: SliceCriterion, budget: Optional[int] = None) -> Tuple[FrozenSet[str], int]:
    """Return the fixed sites and the number of free sites for ``criterion``.

    Raises:
        SearchBudgetExceeded: If the free sites exceed ``budget`` (default Settings.siteBudget).
    """
    limit = Settings.siteBudget if budget is None else budget
    required = required_closure(criterion.schema, criterion.required_sites)
    free = len(sites(criterion.schema)) - len(required)
    if free > limit:
        raise SearchBudgetExceeded(f"{free} deletable sites exceed the search budget of {limit}")
    return required, free


def _batches(items: Iterable[Schema], size: int) -> Iterator[List[Schema]]:
    iterator = iter(items)
    while True:
        batch = list(itertools.islice(iterator, size))
        if not batch:
            return
        yield batch


def _run(
    checker: Callable[[SliceCriterion, Schema], SliceVerdict],
    criterion: SliceCriterion,
    batch: Sequence[Schema],
    executor: Optional[ThreadPoolExecutor],
) -> List[SliceVerdict]:
    if executor is None:
        return [checker(criterion, q) for q in batch]
    return list(executor.map(lambda q: checker(criterion, q), batch))


def find_slices(
    criterion: SliceCriterion,
    mode: SliceMode = SliceMode.PFDS,
    want: SearchGoal = SearchGoal.EXISTS,
    budget: Optional[int] = None,
    workers: Optional[int] = None,
) -> SliceSearchReport:
    """Search the quotient lattice of the criterion schema.

    Args:
        criterion: Slicing criterion.
        mode: PFDS or DS.
        want: EXISTS for one non-trivial slice, MINIMAL for the minimal antichain.
        budget: Free-site limit; defaults to Settings.siteBudget.
        workers: Checker threads; defaults to Settings.searchWorkers.

    Raises:
        SearchBudgetExceeded: If the schema has too many free sites.
    """
    required, free = search_space(criterion, budget)
    threads = Settings.searchWorkers if workers is None else workers
    _logger.info("Searching %s slices (%s) over %d free sites", mode.value, want.value, free)
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        if want is SearchGoal.EXISTS:
            report = _find_any(criterion, mode, required, free, executor, max(threads, 1) * 4)
        else:
            report = _find_minimal(criterion, mode, required, free, executor)
    finally:
        if executor is not None:
            executor.shutdown(wait=True)
    outcome = "found" if report.exists else "not found"
    _logger.info("Checked %d quotients; non-trivial slice %s", report.checked, outcome)
    return report


def _find_any(
    criterion: SliceCriterion,
    mode: SliceMode,
    required: FrozenSet[str],
    free: int,
    executor: Optional[ThreadPoolExecutor],
    batch_size: int,
) -> SliceSearchReport:
    candidates = enumerate_quotients(criterion.schema, required)
    next(candidates)  # the schema itself
    checked = 0
    for batch in _batches(candidates, batch_size):
        verdicts = _run(mode.checker, criterion, batch, executor)
        for quotient, verdict in zip(batch, verdicts):
            checked += 1
            _logger.debug("%s: %s", sorted(symbols(quotient)), verdict.verdict_line())
            if verdict:
                return SliceSearchReport(mode, SearchGoal.EXISTS, True, quotient, (), checked, free)
    return SliceSearchReport(mode, SearchGoal.EXISTS, False, None, (), checked, free)


def _find_minimal(
    criterion: SliceCriterion,
    mode: SliceMode,
    required: FrozenSet[str],
    free: int,
    executor: Optional[ThreadPoolExecutor],
) -> SliceSearchReport:
    minimal: List[Schema] = []
    minimal_symbols: List[FrozenSet[str]] = []
    checked = 0
    candidates = enumerate_quotients(criterion.schema, required, ascending=True)
    # Quotients of one size never contain each other, so a level can be
    # checked as a batch against the minima of smaller levels.
    for _, level in itertools.groupby(candidates, key=lambda q: len(sites(q))):
        batch = [q for q in level if not any(found <= symbols(q) for found in minimal_symbols)]
        verdicts = _run(mode.checker, criterion, batch, executor)
        checked += len(batch)
        for quotient, verdict in zip(batch, verdicts):
            _logger.debug("%s: %s", sorted(symbols(quotient)), verdict.verdict_line())
            if verdict:
                minimal.append(quotient)
                minimal_symbols.append(symbols(quotient))
    ordered = tuple(sorted(minimal, key=lambda q: tuple(sorted(symbols(q)))))
    trivial = symbols(criterion.schema)
    non_trivial = [q for q in ordered if symbols(q) != trivial]
    witness = non_trivial[0] if non_trivial else None
    return SliceSearchReport(mode, SearchGoal.MINIMAL, bool(non_trivial), witness, ordered, checked, free)


__all__ = [
    "SearchGoal",
    "SliceMode",
    "SliceSearchReport",
    "find_slices",
    "search_space",
]
