"""Exact and multiprecision tools for Berndt-type hyperbolic integrals and series."""

from .errors import BerndtForgeError

__version__ = "0.1.0"

__all__ = ["BerndtForgeError", "__version__"]
