"""Exact computations on the Bruhat-Tits tree of SL2(Qp).

The package computes with homothety classes of Z_p-lattices, compact open
subgroups given by entrywise valuation patterns, smooth characters of Z_p^*
and their principal-series types, exact cyclotomic character theory on
finite congruence quotients, Mayer-Vietoris two-term complexes on finite
subtrees, and Smith-normal-form K0 reports for the resulting induction
squares.
"""

from .padic import (
    INF,
    LatticeForm,
    Mat2,
    NegativeValuation,
    SingularBasis,
    elementary_divisor_exponents,
    lattice_canonical,
    reduce_mod,
    valuation,
)
from .tree import TreeEdge, TreeVertex, standard_edge, standard_vertex

__all__ = [
    "INF",
    "LatticeForm",
    "Mat2",
    "NegativeValuation",
    "SingularBasis",
    "TreeEdge",
    "TreeVertex",
    "elementary_divisor_exponents",
    "lattice_canonical",
    "reduce_mod",
    "standard_edge",
    "standard_vertex",
    "valuation",
]
