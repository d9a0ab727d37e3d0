"""3-CNF formulas, the 3SAT hardness gadget, worked examples and the round-trip harness.

See Also:
    - docs/FILE_FORMATS.md: DIMACS input and gadget output files
"""

from .cnf import Cnf3, brute_force_sat, parse_dimacs
from .corpus import run_fixture, worked_examples
from .roundtrip import round_trip
from .sat_reduction import GadgetInstance, gen_3sat

__all__ = [
    "Cnf3",
    "GadgetInstance",
    "brute_force_sat",
    "gen_3sat",
    "parse_dimacs",
    "round_trip",
    "run_fixture",
    "worked_examples",
]
