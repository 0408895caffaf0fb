"""Matching and chromatic polynomials and their root measures."""

from .chromatic import (
    chromatic_polynomial,
    chromatic_root_measure,
    chvalue_identity_check,
    chvalue_ratio,
    star_sequence,
)
from .intpoly import IntPolynomial
from .matching import (
    MatchingProfile,
    matching_measure,
    matching_polynomial,
    matching_profile,
    matching_totals,
    matchpar_check,
    rho_moment_via_walks,
    treelike_total,
    treelike_walk_count,
)
from .roots import RealRootSet, RootMeasure, complex_roots, real_roots

__all__ = [
    "IntPolynomial",
    "MatchingProfile",
    "RealRootSet",
    "RootMeasure",
    "chromatic_polynomial",
    "chromatic_root_measure",
    "chvalue_identity_check",
    "chvalue_ratio",
    "complex_roots",
    "matching_measure",
    "matching_polynomial",
    "matching_profile",
    "matching_totals",
    "matchpar_check",
    "real_roots",
    "rho_moment_via_walks",
    "star_sequence",
    "treelike_total",
    "treelike_walk_count",
]
