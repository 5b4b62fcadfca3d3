"""Dimension lower bounds for the Rauzy gasket from branch-word derivative sweeps."""
from .bound import BoundReport, dimension_lower_bound
from .geometry import (BasisCoords, Jacobian2, SimplexPoint, basis_coords, jacobian,
                       largest_singular_value, projective_apply)
from .ifs import GENERATORS, enumerate_words, word_product
from .pruning import prune_fixed_point, select_istar, select_istarstar
from .sweep import EvalMode, SweepResult, WordStats, build_table, expansion_certificate, word_stats

__all__ = [
    "BasisCoords", "BoundReport", "EvalMode", "GENERATORS", "Jacobian2", "SimplexPoint",
    "SweepResult", "WordStats", "basis_coords", "build_table", "dimension_lower_bound",
    "enumerate_words", "expansion_certificate", "jacobian", "largest_singular_value",
    "projective_apply", "prune_fixed_point", "select_istar", "select_istarstar",
    "word_product", "word_stats",
]
