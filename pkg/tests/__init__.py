"""Test suite for Schlice."""
