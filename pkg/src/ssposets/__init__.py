"""Posets of layers of abelian arrangements and their supersolvability."""
from .affine import AffineArrangement, affine_ss_check, intersection_poset
from .exactalg import IntMatrix, LatticeBasis, hnf, saturate, smith_form, snf
from .families import classical, dowling_poset, graphic_arrangement
from .invariants import charpoly_factored, lcs_ranks, poincare
from .layers import Arrangement, Layer, LayerPoset, build_layers
from .poset import FinitePoset, GroupAction, quotient
from .polynomial import IntPolynomial
from .ssolv import (IdealChain, is_m_ideal, is_tm_ideal, strictly_supersolvable_chain,
                    supersolvable_chain, tower_report, verify_chain)

__all__ = [
    "AffineArrangement", "affine_ss_check", "charpoly_factored", "classical", "dowling_poset",
    "graphic_arrangement", "intersection_poset", "lcs_ranks", "poincare",
    "Arrangement", "FinitePoset", "GroupAction", "IdealChain", "IntMatrix", "IntPolynomial",
    "Layer", "LayerPoset", "LatticeBasis", "build_layers", "hnf", "is_m_ideal", "is_tm_ideal",
    "quotient", "saturate", "smith_form", "snf", "strictly_supersolvable_chain",
    "supersolvable_chain", "tower_report", "verify_chain",
]
__version__ = "0.1.0"
