"""Exact lattice width and lattice size computations for lattice polytopes."""

from .polytope import (
    DegenerateError,
    DomainError,
    LatticePolytope,
    UnimodularMap,
    apply_map,
    convex_hull,
    corner_l,
    dump_polytope,
    inradius_bound,
    interior_lattice_points,
    is_empty_polytope,
    l1,
    lattice_points,
    load_polytope,
    nls_cube,
    nls_simplex,
    polytope_from_json,
    polytope_to_json,
    standard_simplex,
    unit_cube,
    width_in_direction,
)
from .reduction import (
    Basis,
    basis_for,
    basis_from_json,
    basis_to_json,
    gauss_reduce_2d,
    is_reduced,
    lattice_width,
    minimize_over_plane,
    minkowski_basis,
    minkowski_upgrade,
    reduce_basis_3d,
)
from .latticesize import (
    CandidateSet,
    LatticeSizeResult,
    enumerate_short_directions,
    lattice_size,
    ls_bruteforce,
    ls_bruteforce_reduced,
    ls_cube_via_reduction,
    ls_delta_2d,
    ls_interior_class,
    ls_width_one,
    normalize_to_slab,
    reduced_search,
)
from .generators import (
    GenSpec,
    random_polytope,
    random_prism,
    random_unimodular_map,
    random_white,
    random_width_one,
    trial_rng,
    unimodular_prism,
    white_tetrahedron,
)
from .harness import (
    REDUCTION_GAP_VERTICES,
    REDUCTION_GAP_WITNESS,
    TrialRecord,
    reduction_gap_polytope,
    run_experiment,
    verify_counterexample,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
