"""Profiles, monomorphic decompositions, age algebras and Hilbert series."""

__version__ = "0.1.0"
