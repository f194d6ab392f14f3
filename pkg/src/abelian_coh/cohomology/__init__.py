from .classify import (
    ATOM_TOL_EXPLICIT,
    ATOM_TOL_INFERRED,
    ClassificationReport,
    Verdict,
    classify,
    decide,
    homomorphism_cocycle,
)
from .cocycle import (
    Cocycle,
    CocycleCheck,
    box_residual,
    coboundary_residual,
    random_smooth_cocycle,
    validate_cocycle,
)
from .shells import NontrivialCocycle, PartialSumCertificate, build_nontrivial_cocycle
from .solver import (
    ApproximationStage,
    CoboundarySolution,
    SmoothingMeasure,
    approximate_by_coboundaries,
    find_smoothing_measure,
    solve_coboundary,
)

__all__ = [
    "ATOM_TOL_EXPLICIT", "ATOM_TOL_INFERRED", "ApproximationStage", "ClassificationReport",
    "CoboundarySolution", "Cocycle", "CocycleCheck", "NontrivialCocycle", "PartialSumCertificate",
    "SmoothingMeasure", "Verdict", "approximate_by_coboundaries", "box_residual",
    "build_nontrivial_cocycle", "classify", "coboundary_residual", "decide",
    "find_smoothing_measure", "homomorphism_cocycle", "random_smooth_cocycle", "solve_coboundary", "validate_cocycle",
]
