"""
Moment maps in logarithmic coordinates.

Torus invariant points are carried as ``s`` with ``s_j = log|z_j|^2``. All
functions accept a single point of shape (m,) or a batch of shape (n, m).
"""
import logging

import numpy as np
from scipy.special import logsumexp

from newton_ensemble.errors import BoundaryPoint
from newton_ensemble.polytope import LatticePolytope, lattice_points

__all__ = [
    'softplus_logsum',
    'mu_sigma',
    'mu_sigma_jacobian',
    'lmap',
    'lmap_inv',
    'lmap_jacobian',
    'mu_polytope_orbit',
    's_from_moduli',
]

log = logging.getLogger(__name__)


def _with_origin(s: np.ndarray) -> np.ndarray:
    return np.concatenate([np.zeros(s.shape[:-1] + (1,)), s], axis=-1)


def softplus_logsum(s) -> np.ndarray:
    """``log(1 + sum_j exp(s_j))`` along the last axis."""
    s = np.asarray(s, dtype=float)
    return logsumexp(_with_origin(s), axis=-1)


def mu_sigma(s) -> np.ndarray:
    """Moment map of projective space, ``exp(s_j) / (1 + sum_k exp(s_k))``."""
    s = np.asarray(s, dtype=float)
    return np.exp(s - softplus_logsum(s)[..., None])


def mu_sigma_jacobian(s) -> np.ndarray:
    """Derivative of mu_sigma in s: ``diag(x) - x x^T``."""
    x = mu_sigma(s)
    return x[..., :, None] * np.eye(x.shape[-1]) - x[..., :, None] * x[..., None, :]


def _check_simplex(x: np.ndarray) -> np.ndarray:
    x0 = 1.0 - x.sum(axis=-1)
    if np.any(x <= 0) or np.any(x0 <= 0):
        raise BoundaryPoint('point leaves the open simplex', min_coordinate=float(np.min(x)),
                            min_x0=float(np.min(x0)))
    return x0


def lmap(x) -> np.ndarray:
    """Inverse of mu_sigma: ``log(x_j / x_0)`` with ``x_0 = 1 - sum x``."""
    x = np.asarray(x, dtype=float)
    x0 = _check_simplex(x)
    return np.log(x) - np.log(x0)[..., None]


def lmap_inv(t) -> np.ndarray:
    return mu_sigma(t)


def lmap_jacobian(x) -> np.ndarray:
    """``1/x_0 + delta_jk / x_j``; symmetric with eigenvalues above 1."""
    x = np.asarray(x, dtype=float)
    x0 = _check_simplex(x)
    m = x.shape[-1]
    return (1.0 / x0)[..., None, None] * np.ones((m, m)) + np.eye(m) / x[..., None, :]


def mu_polytope_orbit(polytope: LatticePolytope, s) -> np.ndarray:
    """
    Weighted average of the lattice points of P with weights ``exp(<alpha, s>)``.

    Uses unit monomial constants. Diagnostic only: decay rates never go through it.
    """
    points = lattice_points(polytope, 1).astype(float)
    s = np.asarray(s, dtype=float)
    exponents = s @ points.T
    weights = np.exp(exponents - logsumexp(exponents, axis=-1, keepdims=True))
    return weights @ points


def s_from_moduli(moduli) -> np.ndarray:
    """Converts ``|z_j|`` to ``s_j = log|z_j|^2``."""
    moduli = np.asarray(moduli, dtype=float)
    if np.any(moduli <= 0):
        raise BoundaryPoint('moduli must be positive to lie on the open orbit')
    return 2.0 * np.log(moduli)
