"""Densities, spectra, polynomial root measures and Cantor-set graphonings of
bounded-degree graph sequences with a growing degree bound."""

from .config import (
    CapExceeded,
    Caps,
    ConvergenceError,
    GraphlimError,
    InadmissibleError,
    InfeasibleError,
    InvariantViolation,
    caps,
    set_caps,
)
from .density import hom_count, inj_count, parse_pattern, t, t_inj, t_rooted
from .graph_core import AdmissiblePair, Graph, RandomSource, pair

__all__ = [
    "AdmissiblePair",
    "CapExceeded",
    "Caps",
    "ConvergenceError",
    "Graph",
    "GraphlimError",
    "InadmissibleError",
    "InfeasibleError",
    "InvariantViolation",
    "RandomSource",
    "caps",
    "hom_count",
    "inj_count",
    "pair",
    "parse_pattern",
    "set_caps",
    "t",
    "t_inj",
    "t_rooted",
]
