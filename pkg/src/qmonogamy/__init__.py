"""Qubit entanglement measures and alpha-power monogamy checks."""

__version__ = "0.1.0"
