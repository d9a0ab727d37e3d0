# coding: utf-8
"""Satisfiability round trip through the hardness gadget.

For a formula the harness decides satisfiability by brute force, generates
the gadget, and asks the lattice search whether a non-trivial path-faithful
or dynamic end slice exists. The three answers must agree. When the formula
is satisfiable the quotient selected by the satisfying valuation is also
checked directly with the path-faithful checker.

Thread Safety:
    round_trip_batch may run instances on a ThreadPoolExecutor; each report
    depends only on its formula, and results come back in input order.
"""

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.gadgets.cnf import Cnf3, brute_force_sat
from src.gadgets.sat_reduction import check_gadget_facts, delta_quotient, gen_3sat
from src.herbrand.terms import TermStore
from src.slicing.checkers import check_pfds
from src.slicing.search import SearchGoal, SliceMode, find_slices

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoundTripReport:
    """Outcome of one round trip.

    Attributes:
        formula: The formula.
        satisfiable: Brute-force verdict.
        valuation: Satisfying valuation, if any.
        pfds_exists: A non-trivial path-faithful end slice exists.
        ds_exists: A non-trivial dynamic end slice exists.
        witness_verified: Whether the valuation's quotient passes the
            path-faithful checker; None when unsatisfiable.
        facts: Gadget facts that failed, if any.
        checked: Quotients checked by both searches together.
    """

    formula: Cnf3
    satisfiable: bool
    valuation: Optional[Dict[int, bool]]
    pfds_exists: bool
    ds_exists: bool
    witness_verified: Optional[bool]
    facts: Tuple[str, ...] = ()
    checked: int = 0

    @property
    def agrees(self) -> bool:
        """True when every verdict matches satisfiability and the gadget is well formed."""
        witness_ok = self.witness_verified is not False
        return (
            self.pfds_exists == self.satisfiable
            and self.ds_exists == self.satisfiable
            and witness_ok
            and not self.facts
        )

    def summary(self) -> str:
        return (
            f"n={self.formula.variables} m={len(self.formula.clauses)} "
            f"sat={str(self.satisfiable).lower()} pfds={str(self.pfds_exists).lower()} "
            f"ds={str(self.ds_exists).lower()} "
            f"witness={'-' if self.witness_verified is None else str(self.witness_verified).lower()} "
            f"{'agree' if self.agrees else 'DISAGREE'}"
        )


def round_trip(formula: Cnf3, budget: Optional[int] = None) -> RoundTripReport:
    """Run one round trip.

    Raises:
        SatBudgetExceeded: If the formula is too large for brute force.
        SearchBudgetExceeded: If the gadget has more free sites than ``budget``.
    """
    store = TermStore()
    sat = brute_force_sat(formula)
    instance = gen_3sat(formula)
    facts = check_gadget_facts(instance, store)
    criterion = instance.criterion(store)

    pfds = find_slices(criterion, SliceMode.PFDS, SearchGoal.EXISTS, budget=budget, workers=1)
    ds = find_slices(criterion, SliceMode.DS, SearchGoal.EXISTS, budget=budget, workers=1)

    witness: Optional[bool] = None
    if sat.satisfiable and sat.valuation is not None:
        witness = check_pfds(criterion, delta_quotient(instance, sat.valuation)).accepted

    report = RoundTripReport(
        formula,
        sat.satisfiable,
        sat.valuation,
        pfds.exists,
        ds.exists,
        witness,
        facts.failures,
        pfds.checked + ds.checked,
    )
    if not report.agrees:
        _logger.warning("Round trip disagreement: %s (%s)", report.summary(), formula.to_dimacs().strip())
    else:
        _logger.debug("Round trip: %s", report.summary())
    return report


def random_formula(rng: random.Random, variables: int, clauses: int) -> Cnf3:
    """Draw a formula with ``clauses`` uniformly random 3-literal clauses."""
    return Cnf3.from_ints(
        variables,
        [
            [rng.randint(1, variables) * rng.choice((1, -1)) for _ in range(3)]
            for _ in range(clauses)
        ],
    )


def random_formulas(
    count: int, seed: int = 0, max_variables: int = 3, max_clauses: int = 4
) -> Iterator[Cnf3]:
    """Yield ``count`` reproducible random formulas with sizes up to the given bounds."""
    rng = random.Random(seed)
    for _ in range(count):
        yield random_formula(rng, rng.randint(1, max_variables), rng.randint(1, max_clauses))


def _literal_key(literal: int) -> Tuple[int, bool]:
    return abs(literal), literal < 0


def _normal_form(clauses: Iterable[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(clause, key=_literal_key)) for clause in clauses))


def _rename(mapping: Dict[int, int], literal: int) -> int:
    return mapping[abs(literal)] if literal > 0 else -mapping[abs(literal)]


def small_formulas(variables: int, max_clauses: int) -> Iterator[Cnf3]:
    """Yield one formula per symmetry class over exactly ``variables`` variables.

    Two clause multisets are in one class when renaming the variables and
    flipping the polarity of some of them maps one onto the other. Every
    class with 1 to ``max_clauses`` clauses is yielded once, as its least
    member. The number of multisets grows quickly; n=2 with m=3 is about
    fifteen hundred.
    """
    indices = range(1, variables + 1)
    literals = [sign * index for index in indices for sign in (1, -1)]
    clauses = list(itertools.combinations_with_replacement(literals, 3))
    symmetries = [
        {index: sign * image for index, image, sign in zip(indices, order, signs)}
        for order in itertools.permutations(indices)
        for signs in itertools.product((1, -1), repeat=variables)
    ]
    for count in range(1, max_clauses + 1):
        for chosen in itertools.combinations_with_replacement(clauses, count):
            form = _normal_form(chosen)
            images = (
                _normal_form([[_rename(mapping, lit) for lit in clause] for clause in chosen])
                for mapping in symmetries
            )
            if form == min(images):
                yield Cnf3.from_ints(variables, form)


def round_trip_batch(
    formulas: Sequence[Cnf3], budget: Optional[int] = None, workers: int = 1
) -> List[RoundTripReport]:
    """Round-trip every formula, in order."""
    if workers <= 1:
        reports = [round_trip(f, budget) for f in formulas]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            reports = list(executor.map(lambda f: round_trip(f, budget), formulas))
    disagreements = sum(1 for r in reports if not r.agrees)
    _logger.info("Round-tripped %d formulas, %d disagreements", len(reports), disagreements)
    return reports


__all__ = [
    "RoundTripReport",
    "random_formula",
    "random_formulas",
    "round_trip",
    "round_trip_batch",
    "small_formulas",
]
