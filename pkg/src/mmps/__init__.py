"""Analysis of implicit max-min-plus-scaling discrete-event systems."""

from .fixedpoints import (FixedPointSet, build_constraints, fixed_point_set, membership,
                          reparameterize, sigma_bounds, solve_fixed_point_set)
from .growth import FootprintPair, GrowthSolution, enumerate_footprints, footprint_count, solve_all
from .linearization import linearize, linearize_with_region, piecewise_step_check, region, shifted_region
from .lp import LinearProgram, LpStatus, solve_lp
from .model import MmpsSystem, check_time_invariance, evaluate_rhs, validate
from .normalization import (denormalize_state, extract_footprint, normalize, solution_at,
                            verify_structure)
from .railway import RailwayParams, build_model, default_params
from .simulator import buffer_stability_probe, empirical_growth, simulate, step
from .solvability import NotSolvable, certify, dependency_matrix, find_certificate, structure_matrices
from .stability import classify, corollary_check, eigenvalues, geometric_multiplicity
from .tropical import EPS, TOP, maxplus_mul, minplus_mul

__all__ = [name for name in dir() if not name.startswith("_")]
