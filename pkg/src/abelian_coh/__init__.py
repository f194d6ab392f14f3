"""Positive definite functions on finitely generated abelian groups, their
spectral measures, and the first cohomology of the associated representation."""

from .bochner import (
    PdFunction,
    atom_at_trivial,
    bochner_forward,
    bochner_inverse,
    check_positive_definite,
)
from .cohomology import (
    Cocycle,
    approximate_by_coboundaries,
    build_nontrivial_cocycle,
    classify,
    find_smoothing_measure,
    solve_coboundary,
    validate_cocycle,
)
from .gns import build_gns, verify_equivalence
from .groups import (
    DualPoint,
    GroupDescriptor,
    GroupElement,
    dual_distance,
    evaluate_character,
    hom_to_C_dimension,
)
from .measure import DualMeasure, decompose, distance_to_support, l2_norm

__version__ = "0.1.0"

__all__ = [
    "Cocycle", "DualMeasure", "DualPoint", "GroupDescriptor", "GroupElement", "PdFunction",
    "approximate_by_coboundaries", "atom_at_trivial", "bochner_forward", "bochner_inverse",
    "build_gns", "build_nontrivial_cocycle", "check_positive_definite", "classify", "decompose",
    "distance_to_support", "dual_distance", "evaluate_character", "find_smoothing_measure",
    "hom_to_C_dimension", "l2_norm", "solve_coboundary", "validate_cocycle", "verify_equivalence",
]
