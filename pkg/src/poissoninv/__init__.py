"""Invariant theory of graded Poisson algebras in three variables, with exact arithmetic."""

__version__ = "0.1.0"
