"""Prover/refuter toolkit for Boolean constraints on entropic vectors."""

__version__ = "0.1.0"
