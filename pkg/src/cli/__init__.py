"""Command-line front end (see src/cli/main.py)."""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
