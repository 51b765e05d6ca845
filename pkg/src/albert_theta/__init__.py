"""Exceptional theta series of the two Euclidean Albert lattices, in exact arithmetic."""

__version__ = "0.1.0"

from .albert import AlbertElement, adjoint, det, rank
from .arith import QuadExt
from .lattice import make_lattice
from .modforms import QSeries
from .octonion import Octonion

__all__ = ["AlbertElement", "Octonion", "QSeries", "QuadExt", "adjoint", "det", "make_lattice", "rank", "__version__"]
