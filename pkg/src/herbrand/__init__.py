"""Herbrand semantics of paths.

This module provides:
- TermStore: hash-consed terms compared by integer id
- HerbrandState: variable-to-term states and predicate-free execution
- Consequences, executability and compatibility of paths
"""

from .engine import HerbrandState, check_consistent, consequences, is_executable, run_predicate_free
from .terms import DEFAULT_STORE, TermStore

__all__ = [
    "DEFAULT_STORE",
    "HerbrandState",
    "TermStore",
    "check_consistent",
    "consequences",
    "is_executable",
    "run_predicate_free",
]
