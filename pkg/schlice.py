#!/usr/bin/env python3
# coding: utf-8
"""Schlice launcher: ``python schlice.py <command> [flags]``."""

import sys

from src.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
