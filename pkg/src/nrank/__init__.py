"""Exact N-rank / r-order invariants of integer matrices, the regular versus
exceptional classification, and elliptic-curve growth experiments."""

from .linalg import IntegerMatrix, n_rank, smith_normal_form, mat_pow_mod, minor_det
from .poly import RationalPoly, char_poly, factor_over_Q, invariant_factors
from .algnum import AlgebraicNumber, mult_dependent, weil_height
from .spectral import classify, classify_all, corollary_check, spectral_profile
from .order import (
    exceptional_witness_series,
    gcd_growth_series,
    k_invariant,
    lemma_gcd_check,
    ord_r,
)
from .ecfield import EllipticCurve, FiniteField, group_structure, trace

__version__ = "0.1.0"
