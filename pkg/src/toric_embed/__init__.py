"""Toric embeddings of Calabi-Yau hypersurfaces along edges of reflexive polytopes.

The package builds, from a complete simplicial fan and an edge of the dual
reflexive polytope with interior lattice points, a larger toric variety in
which the hypersurface becomes a complete intersection whose binomial
equations can be deformed.
"""
from .embed import (
    CompleteIntersectionSpec,
    DeformationFamily,
    EdgeSelection,
    EmbeddingData,
    apply_phi,
    binomial_equations,
    build_generators,
    build_sigma_gamma,
    deformation_family,
    invert_phi_on_image,
    phi_map,
    pullback_hypersurface,
    select_edge,
    select_edge_by_rays,
)
from .errors import (
    BudgetExceeded,
    DegenerateInputError,
    DimensionError,
    FanError,
    GradingError,
    HypothesisViolation,
    InvariantFailure,
    PolytopeError,
    ToricError,
)
from .fan import Cone, Fan, face_fan, is_complete, star_subdivide, validate_fan
from .grading import DegreeClass, GradingContext, Polynomial, class_group
from .polytope import Face, Polytope, dual_face, dual_polytope, from_vertices, is_reflexive
from .verify import check_hypotheses, h1_dims, minimal_orbifold_check, nondegeneracy_scan

__version__ = "0.1.0"
