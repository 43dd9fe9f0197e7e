"""Invariant theory of permutation groups through quotients of the boolean complex."""

__version__ = "0.1.0"
