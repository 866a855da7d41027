"""
Simultaneous polynomial root finding by Aberth–Ehrlich iteration.

Initial guesses sit on the circles given by the Newton polygon of the
coefficient moduli, with random phases; every returned root is certified by
its relative Newton correction ``|f(z)/f'(z)| / max(1, |z|)``.
"""
import logging
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from newton_ensemble.errors import RootFindingFailed

__all__ = [
    'CERTIFICATE_TOLERANCE',
    'newton_polygon_radii',
    'aberth_roots',
    'trim_coefficients',
]

log = logging.getLogger(__name__)

CERTIFICATE_TOLERANCE = 1e-8
_CONVERGED = 1e-14


def trim_coefficients(coeffs, relative: float = 0.0):
    """
    Strips numerically zero low and high coefficients.

    :return: (valuation, trimmed coefficients) with nonzero first and last entries
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    magnitude = np.abs(coeffs)
    threshold = relative * magnitude.max() if len(coeffs) else 0.0
    nonzero = np.flatnonzero(magnitude > threshold)
    if not len(nonzero):
        return 0, coeffs[:0]
    return int(nonzero[0]), coeffs[nonzero[0]:nonzero[-1] + 1]


def newton_polygon_radii(coeffs) -> np.ndarray:
    """
    Root moduli predicted by the upper convex hull of ``(k, log|c_k|)``.

    A hull edge from k=i to k=j contributes ``j - i`` radii ``|c_i/c_j|^(1/(j-i))``.
    """
    magnitude = np.abs(np.asarray(coeffs, dtype=complex))
    support = np.flatnonzero(magnitude > 0)
    heights = np.log(magnitude[support])
    hull = []
    for k, height in zip(support, heights):
        while len(hull) >= 2:
            (k1, h1), (k2, h2) = hull[-2], hull[-1]
            # drop the middle point when it is not strictly above the chord
            if (h2 - h1) * (k - k1) <= (height - h1) * (k2 - k1):
                hull.pop()
            else:
                break
        hull.append((k, height))
    radii = []
    for (i, hi), (j, hj) in zip(hull, hull[1:]):
        radii.extend([np.exp((hi - hj) / (j - i))] * (j - i))
    return np.array(radii)


def _aberth_sweep(z: np.ndarray, coeffs: np.ndarray, derivative: np.ndarray, max_iter: int) -> np.ndarray:
    n = len(z)
    for _ in range(max_iter):
        with np.errstate(all='ignore'):
            ratio = npoly.polyval(z, coeffs) / npoly.polyval(z, derivative)
            difference = z[:, None] - z[None, :]
            difference[np.diag_indices(n)] = 1.0
            repulsion = 1.0 / difference
            repulsion[np.diag_indices(n)] = 0.0
            correction = ratio / (1.0 - ratio * repulsion.sum(axis=1))
        if not np.all(np.isfinite(correction)):
            break
        z = z - correction
        if np.all(np.abs(correction) <= _CONVERGED * np.maximum(1.0, np.abs(z))):
            break
    return z


def aberth_roots(
        coeffs,
        rng: np.random.Generator,
        tolerance: float = CERTIFICATE_TOLERANCE,
        max_iter: int = 500,
        retries: int = 2) -> np.ndarray:
    """
    All roots of ``sum_k c_k z^k`` (coefficients from low to high degree).

    :raises RootFindingFailed: when the constant or leading coefficient is zero,
        or some root fails certification after every retry
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if len(coeffs) < 2:
        return np.empty(0, dtype=complex)
    if coeffs[0] == 0 or coeffs[-1] == 0:
        raise RootFindingFailed('constant and leading coefficients must be nonzero',
                                constant=abs(coeffs[0]), leading=abs(coeffs[-1]))
    coeffs = coeffs / np.abs(coeffs).max()
    n = len(coeffs) - 1
    if n == 1:
        return np.array([-coeffs[0] / coeffs[1]])

    derivative = npoly.polyder(coeffs)
    radii = newton_polygon_radii(coeffs)
    worst: Optional[float] = None
    for attempt in range(retries + 1):
        phases = 2 * np.pi * (np.arange(n) / n + rng.uniform(0.0, 1.0)) \
            + rng.uniform(-0.25, 0.25, n) * 2 * np.pi / n
        spread = np.exp(rng.normal(0.0, 0.05 * attempt, n))
        z = _aberth_sweep(radii * spread * np.exp(1j * phases), coeffs, derivative, max_iter)
        with np.errstate(all='ignore'):
            step = np.abs(npoly.polyval(z, coeffs) / npoly.polyval(z, derivative))
            relative = step / np.maximum(1.0, np.abs(z))
        if np.all(np.isfinite(relative)) and np.all(relative < tolerance):
            return z
        worst = float(np.nanmax(np.where(np.isfinite(relative), relative, np.inf)))
        log.debug('Aberth attempt %d for degree %d failed, worst correction %.3g', attempt, n, worst)
    raise RootFindingFailed('root certification failed for degree %d' % n, degree=n, worst=worst)
