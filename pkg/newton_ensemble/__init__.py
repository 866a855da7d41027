"""
Conditional Szegő kernels of lattice polytopes, their allowed and forbidden
regions, and the zeros of random polynomials with a given Newton polytope.
"""
__version__ = '0.1'

from newton_ensemble.errors import ConfigError, NewtonEnsembleError, NumericError
from newton_ensemble.config import GridSpec, RunConfig, Tolerances
from newton_ensemble.polytope import (
    LatticePolytope,
    boundary_decomposition,
    face_containing,
    faces,
    from_vertices,
    is_delzant,
    lattice_points,
    simplex,
    volume,
)
from newton_ensemble.geometry import lmap, lmap_inv, mu_polytope_orbit, mu_sigma
from newton_ensemble.szego import grad_u_N, hess_u_N, kernel_diag, mass_density, u_N
from newton_ensemble.region import (
    classify,
    decay_b,
    decay_b_action,
    grad_b,
    monge_ampere_mass,
    psi_hessian,
    q_map,
    solve_region,
    u_infty,
)
from newton_ensemble.ensemble import PolySample, sample_poly, zero_statistics, zeros_2d
from newton_ensemble.amoeba import amoeba_points, tentacle_stats

__all__ = [
    '__version__',
    'NewtonEnsembleError',
    'ConfigError',
    'NumericError',
    'GridSpec',
    'RunConfig',
    'Tolerances',
    'LatticePolytope',
    'from_vertices',
    'simplex',
    'faces',
    'face_containing',
    'is_delzant',
    'volume',
    'lattice_points',
    'boundary_decomposition',
    'mu_sigma',
    'lmap',
    'lmap_inv',
    'mu_polytope_orbit',
    'kernel_diag',
    'mass_density',
    'u_N',
    'grad_u_N',
    'hess_u_N',
    'solve_region',
    'classify',
    'q_map',
    'decay_b',
    'decay_b_action',
    'u_infty',
    'grad_b',
    'psi_hessian',
    'monge_ampere_mass',
    'PolySample',
    'sample_poly',
    'zeros_2d',
    'zero_statistics',
    'amoeba_points',
    'tentacle_stats',
]
