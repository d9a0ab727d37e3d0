"""Dynamic slicing of linear schemas.

This module provides:
- SliceCriterion and the path-faithful and dynamic slice checkers
- find_slices: existence and minimal-slice search over the quotient lattice

The scaling probe lives in src.slicing.scaling and is imported on demand,
since it builds on the worked-example fixtures in src.gadgets.
"""

from .checkers import SliceCriterion, SliceVerdict, check_ds, check_pfds, check_pfds_definitional
from .search import SearchGoal, SliceMode, SliceSearchReport, find_slices

__all__ = [
    "SearchGoal",
    "SliceCriterion",
    "SliceMode",
    "SliceSearchReport",
    "SliceVerdict",
    "check_ds",
    "check_pfds",
    "check_pfds_definitional",
    "find_slices",
]
