"""
Diagonal of the conditional Szegő kernel of NP and the finite-N potential u_N.

With ``s_j = log|z_j|^2`` the kernel diagonal is

    ..code::

        Pi(s) = (Np+m)!/(Np)! * sum_{alpha in NP} C(Np, alpha) exp(<alpha, s>) / (1 + sum_j exp(s_j))^Np

where ``C`` is the multinomial coefficient. Every sum is taken in log space.
"""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp

from newton_ensemble.config import LATTICE_CAP_DEFAULT
from newton_ensemble.errors import OutOfSimplex
from newton_ensemble.geometry import softplus_logsum
from newton_ensemble.polytope import LatticePolytope, lattice_points

__all__ = [
    'KernelDiagResult',
    'log_multinomial',
    'fs_norm_sq_log',
    'log_simplex_kernel',
    'kernel_diag',
    'kernel_diag_batch',
    'mass_density',
    'u_N',
    'grad_u_N',
    'hess_u_N',
    'monomial_mass_log',
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelDiagResult:
    log_value: float
    term_count: int
    argmax_alpha: Tuple[int, ...]

    @property
    def value(self) -> float:
        return float(np.exp(self.log_value))


def _check_exponents(alpha: np.ndarray, p: int):
    if np.any(alpha < 0) or np.any(alpha.sum(axis=-1) > p):
        raise OutOfSimplex('exponent outside the simplex of degree %d' % p, p=p)


def log_multinomial(p: int, alpha) -> np.ndarray:
    """``log(p! / ((p-|alpha|)! alpha_1! ... alpha_m!))`` for one exponent or a batch."""
    alpha = np.asarray(alpha, dtype=float)
    return (gammaln(p + 1.0) - gammaln(p - alpha.sum(axis=-1) + 1.0)
            - gammaln(alpha + 1.0).sum(axis=-1))


def fs_norm_sq_log(alpha: Sequence[int], p: int, m: int) -> float:
    """Log of the squared Fubini–Study norm ``p! / ((p+m)! C(p, alpha))`` of a monomial."""
    alpha = np.asarray(alpha)
    _check_exponents(alpha, p)
    return float(gammaln(p + 1.0) - gammaln(p + m + 1.0) - log_multinomial(p, alpha))


def log_simplex_kernel(Np: int, m: int) -> float:
    """``log((Np+m)!/(Np)!)``: the kernel diagonal of the full simplex."""
    return float(gammaln(Np + m + 1.0) - gammaln(Np + 1.0))


def _log_terms(polytope: LatticePolytope, N: int, s: np.ndarray, cap: int):
    alphas = lattice_points(polytope, N, cap)
    Np = N * polytope.p
    log_weights = log_multinomial(Np, alphas)
    terms = log_weights + s @ alphas.T.astype(float)
    return alphas, terms


def kernel_diag(polytope: LatticePolytope, N: int, s, cap: int = LATTICE_CAP_DEFAULT) -> KernelDiagResult:
    s = np.asarray(s, dtype=float)
    alphas, terms = _log_terms(polytope, N, s, cap)
    Np = N * polytope.p
    log_value = (log_simplex_kernel(Np, polytope.dim) + logsumexp(terms)
                 - Np * softplus_logsum(s))
    return KernelDiagResult(
        log_value=float(log_value),
        term_count=len(alphas),
        argmax_alpha=tuple(int(c) for c in alphas[int(np.argmax(terms))]))


def kernel_diag_batch(
        polytope: LatticePolytope,
        N: int,
        points,
        chunk: int = 256,
        cap: int = LATTICE_CAP_DEFAULT) -> np.ndarray:
    """Log kernel diagonal at an (n, m) array of points, in chunks of rows."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    alphas = lattice_points(polytope, N, cap).astype(float)
    Np = N * polytope.p
    log_weights = log_multinomial(Np, alphas)
    result = np.empty(len(points))
    for start in range(0, len(points), chunk):
        block = points[start:start + chunk]
        result[start:start + chunk] = logsumexp(log_weights + block @ alphas.T, axis=1) \
            - Np * softplus_logsum(block)
    return result + log_simplex_kernel(Np, polytope.dim)


def mass_density(polytope: LatticePolytope, N: int, s, cap: int = LATTICE_CAP_DEFAULT) -> float:
    """Kernel diagonal divided by the number of lattice points of NP."""
    result = kernel_diag(polytope, N, s, cap)
    return float(np.exp(result.log_value - np.log(result.term_count)))


def _moment_weights(polytope: LatticePolytope, N: int, s, cap: int):
    s = np.asarray(s, dtype=float)
    alphas, terms = _log_terms(polytope, N, s, cap)
    weights = np.exp(terms - logsumexp(terms))
    return alphas.astype(float), weights, terms


def u_N(polytope: LatticePolytope, N: int, s, cap: int = LATTICE_CAP_DEFAULT) -> float:
    """``(1/N) log Pi + p log(1 + |z|^2)``, a convex function of s."""
    s = np.asarray(s, dtype=float)
    _, terms = _log_terms(polytope, N, s, cap)
    return float((log_simplex_kernel(N * polytope.p, polytope.dim) + logsumexp(terms)) / N)


def grad_u_N(polytope: LatticePolytope, N: int, s, cap: int = LATTICE_CAP_DEFAULT) -> np.ndarray:
    """Weighted average of the points of NP, divided by N: a point of P."""
    alphas, weights, _ = _moment_weights(polytope, N, s, cap)
    return weights @ alphas / N


def hess_u_N(polytope: LatticePolytope, N: int, s, cap: int = LATTICE_CAP_DEFAULT) -> np.ndarray:
    """Weighted covariance of the points of NP, divided by N."""
    alphas, weights, _ = _moment_weights(polytope, N, s, cap)
    centered = alphas - weights @ alphas
    covariance = (centered * weights[:, None]).T @ centered
    return (covariance + covariance.T) / (2.0 * N)


def monomial_mass_log(alpha: Sequence[int], Np: int, s) -> float:
    """Log squared Fubini–Study mass of the normalized monomial z^alpha of degree Np."""
    alpha = np.asarray(alpha)
    _check_exponents(alpha, Np)
    s = np.asarray(s, dtype=float)
    return float(log_multinomial(Np, alpha) + alpha @ s - Np * softplus_logsum(s))
