"""Exact invariants of curve families as kernels of derivations."""

__version__ = "0.1.0"
