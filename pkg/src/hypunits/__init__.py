"""Exact arithmetic for quadratic orders, group ring unit ranks and quaternion units."""

from .errors import HypUnitsError, NoSolutionError
from .quadfield import QuadRat, RingSpec, fundamental_unit, make_ring, pell_solve
from .quaternion import Quaternion, parse_quaternion

__version__ = "0.1.0"

__all__ = [
    "HypUnitsError",
    "NoSolutionError",
    "QuadRat",
    "Quaternion",
    "RingSpec",
    "fundamental_unit",
    "make_ring",
    "parse_quaternion",
    "pell_solve",
]
