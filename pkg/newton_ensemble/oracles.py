"""
Closed forms for the unit square, the trapezoid of the first Hirzebruch surface
and the Hirzebruch polytopes F_n, used to check the numeric region solver.

Nothing here calls the solver. Every function takes ``s = (log|z1|^2, log|z2|^2)``
and works with ``a_j = |z_j|^2``.
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from newton_ensemble.polytope import LatticePolytope, from_vertices

__all__ = [
    'ALLOWED',
    'OracleResult',
    'OracleCase',
    'square_oracle',
    'trapezoid_oracle',
    'hirzebruch_oracle',
    'hirzebruch_polytope',
    'ORACLE_CASES',
]

ALLOWED = 'allowed'


@dataclass(frozen=True)
class OracleResult:
    label: str
    b: float
    hessian: np.ndarray
    rank: int
    interface_distance: float


@dataclass(frozen=True)
class OracleCase:
    name: str
    polytope: Callable[[], LatticePolytope]
    evaluate: Callable[[np.ndarray], OracleResult]
    ranks: Dict[str, int]


def _moment(s: np.ndarray) -> np.ndarray:
    top = max(0.0, float(np.max(s)))
    weights = np.exp(s - top)
    return weights / (np.exp(-top) + weights.sum())


def _allowed_hessian(p: int, s: np.ndarray) -> np.ndarray:
    mu = _moment(s)
    return p * (np.diag(mu) - np.outer(mu, mu))


def _logistic_curvature(t: float) -> float:
    sigma = 1.0 / (1.0 + math.exp(-t))
    return sigma * (1.0 - sigma)


# ===========
# Unit square
# ===========

def square_oracle(s) -> OracleResult:
    """
    Allowed for ``a1 - 1 < a2 < a1 + 1``; R_F above (top edge), R_F* below (right edge).
    """
    s1, s2 = np.asarray(s, dtype=float)
    a1, a2 = math.exp(s1), math.exp(s2)
    distance = min(abs(s2 - math.log1p(a1)), abs(s1 - math.log1p(a2)))
    if a2 >= a1 + 1:
        b = 2 * math.log1p(a1 + a2) - math.log(4 * a2) - math.log1p(a1)
        return OracleResult('R_F', b, np.diag([_logistic_curvature(s1), 0.0]), 1, distance)
    if a1 >= a2 + 1:
        b = 2 * math.log1p(a1 + a2) - math.log(4 * a1) - math.log1p(a2)
        return OracleResult('R_F*', b, np.diag([0.0, _logistic_curvature(s2)]), 1, distance)
    return OracleResult(ALLOWED, 0.0, _allowed_hessian(2, np.array([s1, s2])), 2, distance)


def trapezoid_oracle(s) -> OracleResult:
    """First Hirzebruch trapezoid: the square's upper region is its only forbidden region."""
    s1, s2 = np.asarray(s, dtype=float)
    a1, a2 = math.exp(s1), math.exp(s2)
    distance = abs(s2 - math.log1p(a1))
    if a2 >= a1 + 1:
        b = 2 * math.log1p(a1 + a2) - math.log(4 * a2) - math.log1p(a1)
        return OracleResult('R_F', b, np.diag([_logistic_curvature(s1), 0.0]), 1, distance)
    return OracleResult(ALLOWED, 0.0, _allowed_hessian(2, np.array([s1, s2])), 2, distance)


# ===================
# Hirzebruch surfaces
# ===================

def hirzebruch_polytope(n: int) -> LatticePolytope:
    return from_vertices([(0, 0), (n + 1, 0), (0, 1), (1, 1)])


def hirzebruch_oracle(n: int, s) -> OracleResult:
    """
    Four regions for n >= 2, with ``a_c = 1/(n-1)``:

        ..code::

            allowed  a2 < min((a1 + 1)/n, a_c)
            R_F      a2 >= (a1 + 1)/n and a1 < a_c                    (top edge)
            R_F'     a_c <= a2 < (n-1)^(n-1) a1^n and a1 >= a_c       (slanted edge)
            R_v      a2 >= (n-1)^(n-1) a1^n and a1 >= a_c             (vertex (1, 1))
    """
    if n < 2:
        raise ValueError('hirzebruch_oracle needs n >= 2, use trapezoid_oracle for n = 1')
    s1, s2 = np.asarray(s, dtype=float)
    a1, a2 = math.exp(s1), math.exp(s2)
    p = n + 1
    log_critical = -math.log(n - 1)
    cusp = (n - 1) * math.log(n - 1) + n * s1
    distance = min(abs(s2 - math.log((a1 + 1) / n)), abs(s1 - log_critical),
                   abs(s2 - log_critical), abs(s2 - cusp))
    softplus = math.log1p(a1 + a2)

    if s1 < log_critical:
        if a2 < (a1 + 1) / n:
            return OracleResult(ALLOWED, 0.0, _allowed_hessian(p, np.array([s1, s2])), 2, distance)
        u = s2 + n * math.log1p(a1) + (n + 1) * math.log(n + 1) - n * math.log(n)
        return OracleResult('R_F', p * softplus - u,
                            np.diag([n * _logistic_curvature(s1), 0.0]), 1, distance)
    if s2 < log_critical:
        return OracleResult(ALLOWED, 0.0, _allowed_hessian(p, np.array([s1, s2])), 2, distance)
    if s2 < cusp:
        A, B = n / (n - 1), (n - 1) ** (-1.0 / n)
        w = s1 - s2 / n
        u = (n + 1) * math.log(A + B * math.exp(w)) + (n + 1) / n * (s2 + math.log(n - 1))
        curvature = A * B * math.exp(w) / (A + B * math.exp(w)) ** 2
        direction = np.array([1.0, -1.0 / n])
        return OracleResult("R_F'", p * softplus - u,
                            (n + 1) * curvature * np.outer(direction, direction), 1, distance)
    u = (n + 1) * math.log((n + 1) / (n - 1)) + 2 * math.log(n - 1) + s1 + s2
    return OracleResult('R_v', p * softplus - u, np.zeros((2, 2)), 0, distance)


ORACLE_CASES = {
    'square': OracleCase(
        'square', lambda: from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)]), square_oracle,
        {ALLOWED: 2, 'R_F': 1, 'R_F*': 1}),
    'trapezoid': OracleCase(
        'trapezoid', lambda: from_vertices([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]), trapezoid_oracle,
        {ALLOWED: 2, 'R_F': 1}),
    'hirzebruch2': OracleCase(
        'hirzebruch2', lambda: hirzebruch_polytope(2), lambda s: hirzebruch_oracle(2, s),
        {ALLOWED: 2, 'R_F': 1, "R_F'": 1, 'R_v': 0}),
    'hirzebruch3': OracleCase(
        'hirzebruch3', lambda: hirzebruch_polytope(3), lambda s: hirzebruch_oracle(3, s),
        {ALLOWED: 2, 'R_F': 1, "R_F'": 1, 'R_v': 0}),
}
