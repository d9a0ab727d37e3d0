"""Schlice: dynamic slicing of linear program schemas.

This package provides schema syntax, Herbrand path semantics, both dynamic
slicing criteria with their checkers, and the 3SAT hardness gadgets.
"""

__version__ = "0.1.0"
