"""Exact cluster algebras of geometric type, compatible Poisson brackets,
and connected-component counts for real cluster manifolds."""

from clusterpoisson.exact import (
    LaurentPoly,
    Matrix,
    NotDivisible,
    RationalFunction,
    Singular,
)
from clusterpoisson.exchange import ExchangeMatrix, QuiverGraph, Seed

__all__ = [
    "ExchangeMatrix",
    "LaurentPoly",
    "Matrix",
    "NotDivisible",
    "QuiverGraph",
    "RationalFunction",
    "Seed",
    "Singular",
]

__version__ = "0.1.0"
