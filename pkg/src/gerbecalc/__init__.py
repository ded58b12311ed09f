"""Exact combinatorial differential calculus of non-abelian gerbes."""

__version__ = "0.1.0"
