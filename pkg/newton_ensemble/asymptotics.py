"""
Finite-N behavior of the kernel diagonal against the limit quantities.

In a region whose face has dimension r the kernel behaves like
``c N^((m+r)/2) exp(-N b)``; the fits here recover b, the exponent and the
geometric decay of the allowed region deficit from exact kernel values.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from newton_ensemble.config import LATTICE_CAP_DEFAULT, Tolerances
from newton_ensemble.polytope import LatticePolytope
from newton_ensemble.region import solve_region
from newton_ensemble.szego import kernel_diag, log_simplex_kernel, monomial_mass_log

__all__ = [
    'ConvergenceRow',
    'DeficitFit',
    'convergence_table',
    'prefactor_exponent',
    'allowed_deficit',
    'growth_exponent',
    'monomial_decay_rate',
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    log_kernel: float
    rate: float
    corrected_rate: float
    target: float
    face_dim: int


@dataclass(frozen=True)
class DeficitFit:
    Ns: Tuple[int, ...]
    deficits: Tuple[float, ...]
    rate: float

    @property
    def geometric(self) -> bool:
        return self.rate > 0 and all(a > b for a, b in zip(self.deficits, self.deficits[1:]))


def _slope(x: Sequence[float], y: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.asarray(x, dtype=float), np.asarray(y, dtype=float), 1)
    return float(slope)


def convergence_table(polytope: LatticePolytope, s, Ns: Sequence[int], tolerances: Optional[Tolerances] = None,
                      cap: int = LATTICE_CAP_DEFAULT) -> List[ConvergenceRow]:
    """
    ``-(1/N) log Pi`` per N next to b, with the ``((m+r)/2) log(N)/N`` term added back.
    """
    result = solve_region(polytope, s, tolerances)
    m, r = polytope.dim, result.face.dim
    rows = []
    for N in Ns:
        log_kernel = kernel_diag(polytope, N, s, cap).log_value
        rate = -log_kernel / N
        rows.append(ConvergenceRow(
            N=int(N),
            log_kernel=log_kernel,
            rate=rate,
            corrected_rate=rate + 0.5 * (m + r) * np.log(N) / N,
            target=result.b,
            face_dim=r))
        log.debug('N=%d: -(1/N) log Pi = %.8f, b = %.8f', N, rate, result.b)
    return rows


def prefactor_exponent(polytope: LatticePolytope, s, Ns: Sequence[int], tolerances: Optional[Tolerances] = None,
                       cap: int = LATTICE_CAP_DEFAULT) -> float:
    """Least squares slope of ``log Pi + b N`` against ``log N``."""
    b = solve_region(polytope, s, tolerances).b
    values = [kernel_diag(polytope, N, s, cap).log_value + b * N for N in Ns]
    return _slope(np.log(Ns), values)


def growth_exponent(polytope: LatticePolytope, s, Ns: Sequence[int], cap: int = LATTICE_CAP_DEFAULT) -> float:
    """Least squares slope of ``log Pi`` against ``log N``."""
    return _slope(np.log(Ns), [kernel_diag(polytope, N, s, cap).log_value for N in Ns])


def allowed_deficit(polytope: LatticePolytope, s, Ns: Sequence[int], cap: int = LATTICE_CAP_DEFAULT) -> DeficitFit:
    """
    Relative gap between the kernel and the full simplex value ``prod_j (Np + j)``,
    with the exponential rate fitted over N.
    """
    deficits = []
    for N in Ns:
        gap = kernel_diag(polytope, N, s, cap).log_value - log_simplex_kernel(N * polytope.p, polytope.dim)
        deficits.append(float(abs(np.expm1(gap))))
    rate = -_slope(Ns, np.log(deficits))
    return DeficitFit(tuple(int(N) for N in Ns), tuple(deficits), rate)


def monomial_decay_rate(x: Sequence[float], p: int, s, Ns: Sequence[int]) -> float:
    """
    Exponential decay rate in N of the normalized monomial ``z^alpha`` of degree Np,
    with ``alpha`` the lattice point nearest to ``Np x``.
    """
    x = np.asarray(x, dtype=float)
    values = []
    for N in Ns:
        alpha = np.rint(N * p * x).astype(int)
        values.append(monomial_mass_log(alpha, N * p, s))
    return -_slope(Ns, values)
