"""Exact computations for L-space surgeries on plumbed manifolds and algebraic links."""

__version__ = "0.1.0"
