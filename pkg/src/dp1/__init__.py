"""Exact computations with the 240 exceptional curves on degree-1 del Pezzo surfaces."""

__version__ = "0.1.0"
