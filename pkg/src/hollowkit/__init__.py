"""Critical families of convex bodies and the hollows they enclose.

A family of n + 1 compact convex sets is n-critical when every n of them
share a point but all n + 1 do not.  With as many conditions as
dimensions, such a family traps a bounded hole in the complement of its
union; this package certifies criticality, locates and measures the
hole, and exercises the combinatorial machinery (colorings of simplicial
subdivisions, finite cover checks, crossing-flat verification) that the
geometry rests on.
"""

from .bodies import (Ball, ConvexBody, DEFAULT_TOL, HPolytope,
                     IntersectionBody, VPolytope, dykstra, feasibility_scan)
from .critical import (BORDERLINE_FACTOR, Cage, CriticalFamily,
                       CriticalityFailure, HellyRejection, HollowSimplex,
                       UniquenessReport, cage_contains_hull_vertices,
                       cage_intersection_is_cage, check_critical,
                       helly_guard, hollow_simplex, make_cage, random_cage,
                       recentered_witness, sandwich_check, uniqueness_probe,
                       witness_simplex)
from .errors import (BorderlineCriticalError, ConvergenceError,
                     DegenerateConfigurationError, DegenerateSimplexError,
                     EmptyBodyError, GridResolutionError, HollowNotFoundError,
                     HollowkitError, KleeSolveError, NoHollowError,
                     NotSeparableError, ProjectionError, SceneError,
                     SpernerLegalityError, SubdivisionSizeError,
                     ToleranceAmbiguityError, UnboundedBodyError)
from .geometry import (AffineSubspace, Hyperplane, RadonPartition, Simplex,
                       affine_hull, barycentric, radon_partition)
from .hollow import (BoundaryAttribution, Grid, HollowCertificate,
                     StabbingPair, StabbingReport, boundary_attribution,
                     certify_hollow, enclosure_check, hausdorff_convex,
                     hull_vs_simplex, nearest_boundary_distance,
                     perimeter_estimate, simplex_containment, verify_stabbing)
from .render import render_svg
from .scenes import (SCHEMA, Scene, body_from_json, body_to_json, dumps,
                     load_scene, parse_scene, serialize_scene)
from .solvers import (DistanceResult, FeasibilityReport, SeparationCertificate,
                      intersect_witness, min_distance, separating_hyperplane)
from .sperner import (KkmInstance, KkmReport, SpernerColoring,
                      SubdivisionComplex, family_kkm_instance, find_rainbow,
                      kkm_verify, klee_solve, rainbow_cells,
                      random_legal_coloring, sperner_color, subdivide)

__version__ = "0.1.0"

__all__ = [
    "AffineSubspace", "BORDERLINE_FACTOR", "Ball", "BorderlineCriticalError",
    "BoundaryAttribution", "Cage", "ConvergenceError", "ConvexBody",
    "CriticalFamily", "CriticalityFailure", "DEFAULT_TOL",
    "DegenerateConfigurationError", "DegenerateSimplexError", "DistanceResult",
    "EmptyBodyError", "FeasibilityReport", "Grid", "GridResolutionError",
    "HPolytope", "HellyRejection", "HollowCertificate", "HollowNotFoundError",
    "HollowSimplex", "HollowkitError", "Hyperplane", "IntersectionBody",
    "KkmInstance", "KkmReport", "KleeSolveError", "NoHollowError",
    "NotSeparableError", "ProjectionError", "RadonPartition", "SCHEMA",
    "Scene", "SceneError", "SeparationCertificate", "Simplex",
    "SpernerColoring", "SpernerLegalityError", "StabbingPair",
    "StabbingReport", "SubdivisionComplex", "SubdivisionSizeError",
    "ToleranceAmbiguityError", "UnboundedBodyError", "UniquenessReport",
    "VPolytope", "affine_hull", "barycentric", "body_from_json",
    "body_to_json", "boundary_attribution", "cage_contains_hull_vertices",
    "cage_intersection_is_cage", "certify_hollow", "check_critical", "dumps",
    "dykstra", "enclosure_check", "family_kkm_instance", "feasibility_scan",
    "find_rainbow", "hausdorff_convex", "helly_guard", "hollow_simplex",
    "hull_vs_simplex", "intersect_witness", "kkm_verify", "klee_solve",
    "load_scene", "make_cage", "min_distance", "nearest_boundary_distance",
    "parse_scene", "perimeter_estimate", "radon_partition", "rainbow_cells",
    "random_cage", "random_legal_coloring", "recentered_witness",
    "render_svg", "sandwich_check", "separating_hyperplane",
    "serialize_scene", "simplex_containment", "sperner_color", "subdivide",
    "uniqueness_probe", "verify_stabbing", "witness_simplex",
]
