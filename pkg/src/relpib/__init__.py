"""Relative power integral bases of Z_M[xi] for the octic family
x^4 - 2c x^3 + 2x^2 + 2c x + 1 over imaginary quadratic fields."""

from .ring import QuadInt, RingSpec

__version__ = "0.1.0"

__all__ = ["QuadInt", "RingSpec", "__version__"]
