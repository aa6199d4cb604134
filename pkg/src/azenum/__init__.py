"""Workbench for quadratic-structure groups, central products, and
reverse-lexicographic enumerations with their automorphism machinery."""

__version__ = "0.1.0"
