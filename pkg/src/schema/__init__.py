"""Schema syntax: the immutable schema tree, linearity, quotients, and the text formats."""

from .model import Schema, check_linear, is_quotient
from .parser import parse_path, parse_schema, print_path, print_schema

__all__ = [
    "Schema",
    "check_linear",
    "is_quotient",
    "parse_path",
    "parse_schema",
    "print_path",
    "print_schema",
]
