"""Degrees of real Wronski maps: exact Wronskians, the d and I tables,
real preimage counts and the pole placement dictionary."""

from .combinatorics import real_degree, schubert_degree
from .grassmann import big_cell_polys, plucker, wronski_map
from .polynomials import RationalPoly, real_roots, wronskian

__version__ = "0.1.0"

__all__ = [
    "RationalPoly",
    "big_cell_polys",
    "plucker",
    "real_degree",
    "real_roots",
    "schubert_degree",
    "wronski_map",
    "wronskian",
]
