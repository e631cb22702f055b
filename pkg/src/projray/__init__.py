"""Computational toolkit for complex projective space and covariant unitary pairs."""

from .components import indecomposable_components, is_indecomposable, is_total
from .continuity import (
    BlockRepresentation,
    QuadElement,
    continuous_block,
    continuous_ray_components,
    orbit_continuity_probe,
    twisted_block,
)
from .covariance import (
    CovariantPair,
    MatrixAlgebra,
    SplitResult,
    borchers_arveson_split,
    commutant,
    conditional_expectation,
    generate_star_algebra,
    irreducibility_descent_check,
    minimal_energy_shift,
    spectral_rigidity_check,
)
from .errors import ProjrayError
from .geometry import (
    TangentVector,
    chordal_distance,
    dyadic_chain,
    exp_map,
    log_map,
    midpoint,
    phase_normalized_section,
    projector_distance,
    reflect,
    riemannian_distance,
)
from .linalg import BallPoint, Ray, rank_one, trace_norm, unitary_hull_decompose
from .separation import (
    Frame,
    SeparationReport,
    UnresolvedPair,
    find_unresolved_pair,
    great_circle_test,
    projector_span_rank,
    separates_ball,
)

__version__ = "0.1.0"
