"""Veering triangulations: taut norm faces, carried surfaces, flat moves."""

__version__ = "0.1.0"
