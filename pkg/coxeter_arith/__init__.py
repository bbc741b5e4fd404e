"""Coxeter Arith — exact arithmeticity classification of straight hyperbolic Coxeter prisms."""

__version__ = "1.0.0"
