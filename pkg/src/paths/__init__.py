"""Paths through schemas: validation, enumeration, projection and l-reductions."""

from .cursor import PathCursor, enumerate_paths, project, validate_path
from .reduction import is_l_reducible, simple_l_reductions

__all__ = [
    "PathCursor",
    "enumerate_paths",
    "is_l_reducible",
    "project",
    "simple_l_reductions",
    "validate_path",
]
