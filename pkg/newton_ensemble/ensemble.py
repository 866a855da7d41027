"""
Monte Carlo layer: random polynomials with Newton polytope NP and their zeros.

A sample is ``f = sum_alpha lambda_alpha z^alpha / ||z^alpha||`` with i.i.d.
standard complex Gaussian ``lambda_alpha`` and Fubini–Study monomial norms of
degree Np. Every trial owns a random stream derived from ``(seed, trial)``.
"""
import dataclasses
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp
from scipy.stats import kstest

from newton_ensemble.config import Tolerances
from newton_ensemble.errors import (
    ConfigError,
    DegenerateSystem,
    DimensionUnsupported,
    NumericError,
    ResultantIllConditioned,
)
from newton_ensemble.geometry import softplus_logsum
from newton_ensemble.polytope import LatticePolytope, lattice_points, volume
from newton_ensemble.region import classify
from newton_ensemble.rootfinding import CERTIFICATE_TOLERANCE, aberth_roots, trim_coefficients
from newton_ensemble.szego import log_multinomial

__all__ = [
    'PolySample',
    'ZeroStats',
    'ZEROS_2D_DEGREE_CAP',
    'rng_stream',
    'sample_poly',
    'fs_mass_log',
    'roots_1d',
    'zeros_2d',
    'torus_chart',
    'coefficient_grid',
    'dense_roots',
    'expected_zero_cdf',
    'limit_zero_cdf',
    'zero_statistics',
]

log = logging.getLogger(__name__)

ZEROS_2D_DEGREE_CAP = 10
TORUS_BOUNDS = (1e-12, 1e12)
_TRIM = 1e-10
_INTERPOLATION_SLACK = 4
_INTERPOLATION_TOLERANCE = 1e-6


@dataclass(frozen=True)
class PolySample:
    """One polynomial: integer support rows with their complex coefficients."""
    support: np.ndarray
    coefficients: np.ndarray
    N: Optional[int] = None
    polytope: Optional[LatticePolytope] = field(default=None, repr=False)
    seed: Optional[int] = None
    draw: Tuple[int, ...] = ()

    @staticmethod
    def from_terms(terms: Mapping[Tuple[int, ...], complex]) -> 'PolySample':
        """
        Builds a polynomial from ``{exponent: coefficient}``, e.g. ``z1 z2 - 1``:

            ..code::

                PolySample.from_terms({(1, 1): 1, (0, 0): -1})
        """
        exponents = sorted(terms)
        return PolySample(
            support=np.array(exponents, dtype=np.int64).reshape(len(exponents), -1),
            coefficients=np.array([terms[alpha] for alpha in exponents], dtype=complex))

    @property
    def dim(self) -> int:
        return self.support.shape[1]

    def __call__(self, z) -> complex:
        z = np.asarray(z, dtype=complex)
        return complex(np.sum(self.coefficients * np.prod(z ** self.support, axis=1)))

    def magnitude(self, z) -> float:
        """``sum |c_alpha| |z^alpha|``, the scale of rounding errors in ``f(z)``."""
        z = np.asarray(z, dtype=complex)
        return float(np.sum(np.abs(self.coefficients) * np.prod(np.abs(z) ** self.support, axis=1)))

    def relative_residual(self, z) -> float:
        return abs(self(z)) / max(self.magnitude(z), np.finfo(float).tiny)

    def gradient(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        terms = self.coefficients * np.prod(z ** self.support, axis=1)
        return (terms[:, None] * self.support).sum(axis=0) / z

    def restrict(self, mask: np.ndarray, columns: Sequence[int]) -> 'PolySample':
        """Terms selected by ``mask``, keeping only the exponent ``columns``."""
        return PolySample(
            support=self.support[mask][:, list(columns)],
            coefficients=self.coefficients[mask],
            N=self.N, polytope=None, seed=self.seed, draw=self.draw)

    def univariate(self) -> Tuple[int, np.ndarray]:
        """Dense coefficients of a one variable polynomial: (lowest exponent, coefficients)."""
        if self.dim != 1:
            raise DimensionUnsupported('univariate coefficients need m = 1', dim=self.dim)
        exponents = self.support[:, 0]
        low = int(exponents.min())
        dense = np.zeros(int(exponents.max()) - low + 1, dtype=complex)
        np.add.at(dense, exponents - low, self.coefficients)
        return low, dense


# ========
# Sampling
# ========

def rng_stream(seed: int, *indices: int) -> np.random.Generator:
    """Independent, reproducible stream for ``(seed, trial, draw, ...)``."""
    return np.random.default_rng([int(seed)] + [int(i) for i in indices])


def sample_poly(
        polytope: LatticePolytope,
        N: int,
        rng: np.random.Generator,
        seed: Optional[int] = None,
        draw: Tuple[int, ...] = ()) -> PolySample:
    alphas = lattice_points(polytope, N)
    Np, m = N * polytope.p, polytope.dim
    log_norm_sq = gammaln(Np + 1.0) - gammaln(Np + m + 1.0) - log_multinomial(Np, alphas)
    lam = (rng.standard_normal(len(alphas)) + 1j * rng.standard_normal(len(alphas))) / np.sqrt(2.0)
    return PolySample(
        support=np.array(alphas),
        coefficients=lam * np.exp(-0.5 * log_norm_sq),
        N=N, polytope=polytope, seed=seed, draw=tuple(draw))


def fs_mass_log(f: PolySample, z) -> float:
    """``log(|f(z)|^2 / (1 + |z|^2)^Np)``, the pointwise Fubini–Study mass."""
    z = np.asarray(z, dtype=complex)
    Np = f.N * f.polytope.p
    return float(2.0 * np.log(abs(f(z))) - Np * softplus_logsum(np.log(np.abs(z) ** 2)))


def _default_rng(f: PolySample) -> np.random.Generator:
    if f.seed is None:
        return np.random.default_rng(0)
    return rng_stream(f.seed, *f.draw, 1)


# ============
# Root finding
# ============

def roots_1d(f: PolySample, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Roots in C* of a one variable polynomial; zero end coefficients are dropped."""
    _, dense = trim_coefficients(f.univariate()[1])
    if rng is None:
        rng = _default_rng(f)
    return aberth_roots(dense, rng)


def coefficient_grid(f: PolySample) -> np.ndarray:
    """``grid[k2, k1]`` = coefficient of ``z1^k1 z2^k2`` after dividing out monomials."""
    exponents = f.support - f.support.min(axis=0)
    grid = np.zeros(tuple(exponents.max(axis=0)[::-1] + 1), dtype=complex)
    np.add.at(grid, (exponents[:, 1], exponents[:, 0]), f.coefficients)
    return grid


def _sylvester(f_coeffs: np.ndarray, g_coeffs: np.ndarray) -> np.ndarray:
    """Batched Sylvester matrices; inputs are (M, deg+1) arrays from low to high degree."""
    nodes, df, dg = f_coeffs.shape[0], f_coeffs.shape[1] - 1, g_coeffs.shape[1] - 1
    size = df + dg
    matrix = np.zeros((nodes, size, size), dtype=complex)
    for row in range(dg):
        matrix[:, row, row:row + df + 1] = f_coeffs[:, ::-1]
    for row in range(df):
        matrix[:, dg + row, row:row + dg + 1] = g_coeffs[:, ::-1]
    return matrix


def _resultant_in_z1(F: np.ndarray, G: np.ndarray, rng: np.random.Generator, attempts: int = 3):
    """
    Coefficients of the resultant in z2, by evaluation on a circle of z1 values
    followed by an inverse FFT.
    """
    df, dg = F.shape[0] - 1, G.shape[0] - 1
    if df + dg == 0:
        raise DegenerateSystem('both polynomials are free of z2')
    bound = dg * (F.shape[1] - 1) + df * (G.shape[1] - 1)
    count = bound + 1 + _INTERPOLATION_SLACK
    radius, rotation = 1.0, 0.0
    for attempt in range(attempts):
        center = radius * np.exp(1j * rotation)
        nodes = center * np.exp(2j * np.pi * np.arange(count) / count)
        f_at = (nodes[:, None] ** np.arange(F.shape[1])) @ F.T
        g_at = (nodes[:, None] ** np.arange(G.shape[1])) @ G.T
        matrix = _sylvester(f_at, g_at)
        values = np.linalg.det(matrix)
        hadamard = np.prod(np.linalg.norm(matrix, axis=2), axis=1).max()
        if np.abs(values).max() <= 1e-13 * hadamard:
            raise DegenerateSystem('resultant vanishes identically', hadamard=float(hadamard))
        scaled = np.fft.fft(values) / count
        spill = np.abs(scaled[bound + 1:]).max() / np.abs(scaled).max()
        if spill < _INTERPOLATION_TOLERANCE:
            return scaled[:bound + 1] / center ** np.arange(bound + 1)
        log.debug('resultant interpolation spill %.3g on attempt %d', spill, attempt)
        radius *= np.exp(rng.uniform(-0.5, 0.5))
        rotation = rng.uniform(0.0, 2 * np.pi)
    raise ResultantIllConditioned('resultant interpolation did not settle', spill=float(spill))


def _polish(f: PolySample, g: PolySample, z: np.ndarray, iterations: int = 8) -> np.ndarray:
    for _ in range(iterations):
        values = np.array([f(z), g(z)])
        jacobian = np.array([f.gradient(z), g.gradient(z)])
        try:
            step = np.linalg.solve(jacobian, values)
        except np.linalg.LinAlgError:
            break
        z = z - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(z))):
            break
    return z


def dense_roots(coeffs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    low, trimmed = trim_coefficients(coeffs, _TRIM)
    roots = aberth_roots(trimmed, rng) if len(trimmed) > 1 else np.empty(0, dtype=complex)
    return np.concatenate([np.zeros(low, dtype=complex), roots])


def torus_chart(f: PolySample, scale: np.ndarray, swap: bool = False) -> PolySample:
    """
    ``f`` in the coordinates ``w`` with ``z = scale * w``, where ``w`` is reversed
    first when ``swap`` is set.
    """
    scale = np.asarray(scale, dtype=complex)
    coefficients = f.coefficients * np.prod(scale ** f.support, axis=1)
    support = f.support[:, ::-1] if swap else f.support
    return dataclasses.replace(f, support=np.ascontiguousarray(support), coefficients=coefficients)


def zeros_2d(f: PolySample, g: PolySample, rng: Optional[np.random.Generator] = None,
             rotations: int = 4) -> np.ndarray:
    """
    Common zeros of two polynomials in two variables, as a (k, 2) complex array.

    Eliminates z2 with a Sylvester resultant, back-substitutes each z1 root,
    polishes with joint Newton steps and keeps certified points of C*^2. When
    the resultant does not interpolate, the system is solved again in rotated
    torus coordinates ``z = r e^{i theta} w``, alternately eliminating z1.

    :raises ResultantIllConditioned: when no chart interpolates
    """
    if f.dim != 2 or g.dim != 2:
        raise DimensionUnsupported('zeros_2d needs two polynomials in two variables')
    degree = max(int(f.support.sum(axis=1).max()), int(g.support.sum(axis=1).max()))
    if degree > ZEROS_2D_DEGREE_CAP:
        raise ConfigError('zeros_2d is capped at degree %d, got %d' % (ZEROS_2D_DEGREE_CAP, degree))
    if rng is None:
        rng = _default_rng(f)
    try:
        return _chart_zeros(f, g, rng)
    except ResultantIllConditioned as exc:
        failure = exc
    for rotation in range(rotations):
        scale = np.exp(rng.uniform(-1.0, 1.0, 2) + 1j * rng.uniform(0.0, 2 * np.pi, 2))
        swap = rotation % 2 == 0
        log.debug('retrying zeros_2d in rotated coordinates %s (swap=%s)', scale, swap)
        try:
            w = _chart_zeros(torus_chart(f, scale, swap), torus_chart(g, scale, swap), rng)
        except ResultantIllConditioned as exc:
            failure = exc
            continue
        return scale * (w[:, ::-1] if swap else w)
    raise failure


def _chart_zeros(f: PolySample, g: PolySample, rng: np.random.Generator) -> np.ndarray:
    F, G = coefficient_grid(f), coefficient_grid(g)
    resultant = _resultant_in_z1(F, G, rng)
    low, trimmed = trim_coefficients(resultant, _TRIM)
    if not len(trimmed):
        raise DegenerateSystem('resultant vanishes identically')
    z1_roots = aberth_roots(trimmed, rng) if len(trimmed) > 1 else np.empty(0, dtype=complex)

    lo, hi = TORUS_BOUNDS
    points = []
    for z1 in z1_roots:
        if not lo < abs(z1) < hi:
            continue
        powers = z1 ** np.arange(F.shape[1])
        f_z2 = F @ powers
        g_z2 = G @ (z1 ** np.arange(G.shape[1]))
        first, other = (f_z2, g) if len(trim_coefficients(f_z2, _TRIM)[1]) > 1 else (g_z2, f)
        candidates = dense_roots(first, rng)
        candidates = candidates[(np.abs(candidates) > lo) & (np.abs(candidates) < hi)]
        if not len(candidates):
            continue
        residuals = [other.relative_residual((z1, z2)) for z2 in candidates]
        z = _polish(f, g, np.array([z1, candidates[int(np.argmin(residuals))]]))
        if not np.all((np.abs(z) > lo) & (np.abs(z) < hi)):
            continue
        if max(f.relative_residual(z), g.relative_residual(z)) < CERTIFICATE_TOLERANCE:
            points.append(z)
        else:
            log.debug('dropping uncertified common zero %s', z)
    return np.array(points, dtype=complex).reshape(-1, 2)


# ==========
# Statistics
# ==========

def expected_zero_cdf(polytope: LatticePolytope, N: int, s) -> np.ndarray:
    """
    Distribution function of ``log|z|^2`` over the zeros of a degree-N sample (m = 1):
    ``(N grad u_N(s) - N min P) / (N length P)``.
    """
    alphas = lattice_points(polytope, N)[:, 0].astype(float)
    Np = N * polytope.p
    s = np.atleast_1d(np.asarray(s, dtype=float))
    terms = log_multinomial(Np, alphas[:, None]) + s[:, None] * alphas[None, :]
    weights = np.exp(terms - logsumexp(terms, axis=1, keepdims=True))
    lo, hi = alphas.min(), alphas.max()
    return (weights @ alphas - lo) / (hi - lo)


def limit_zero_cdf(polytope: LatticePolytope, s, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """N -> infinity distribution function ``(q(s) - min P) / length P`` (m = 1)."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    lo, hi = polytope.vertices[0][0], polytope.vertices[-1][0]
    q = classify(polytope, s[:, None], tolerances).q[:, 0]
    return (q - lo) / (hi - lo)


@dataclass
class ZeroStats:
    dim: int
    N: int
    trials: int
    seed: int
    expected_count: int
    bezout_bound: int
    counts: List[Optional[int]] = field(default_factory=list)
    allowed_fractions: List[Optional[float]] = field(default_factory=list)
    boundary_count: int = 0
    failures: Dict[str, int] = field(default_factory=dict)
    s_values: np.ndarray = field(default_factory=lambda: np.empty(0))
    histogram: Tuple[List[float], List[int]] = ((), ())
    ks_distance: Optional[float] = None
    ks_distance_limit: Optional[float] = None
    points: List[dict] = field(default_factory=list)

    @property
    def completed(self) -> int:
        return sum(count is not None for count in self.counts)

    @property
    def allowed_mean(self) -> float:
        values = [f for f in self.allowed_fractions if f is not None]
        return float(np.mean(values)) if values else float('nan')

    @property
    def allowed_stderr(self) -> float:
        values = [f for f in self.allowed_fractions if f is not None]
        if len(values) < 2:
            return float('nan')
        return float(np.std(values, ddof=1) / np.sqrt(len(values)))

    @property
    def kouchnirenko_rate(self) -> float:
        """Share of completed trials whose zero count equals m! Vol(NP)."""
        counts = [count for count in self.counts if count is not None]
        if not counts:
            return 0.0
        return sum(count == self.expected_count for count in counts) / len(counts)

    def to_dict(self) -> dict:
        edges, histogram_counts = self.histogram
        return dict(
            dim=self.dim, N=self.N, trials=self.trials, seed=self.seed,
            expected_count=self.expected_count,
            bezout_bound=self.bezout_bound,
            completed=self.completed,
            kouchnirenko_rate=self.kouchnirenko_rate,
            counts=self.counts,
            allowed_fractions=self.allowed_fractions,
            allowed_mean=self.allowed_mean,
            allowed_stderr=self.allowed_stderr,
            boundary_count=self.boundary_count,
            failures=dict(self.failures),
            histogram=dict(edges=list(edges), counts=list(histogram_counts)),
            ks_distance=self.ks_distance,
            ks_distance_limit=self.ks_distance_limit)


@dataclass(frozen=True)
class _TrialOutcome:
    zeros: np.ndarray
    s: np.ndarray
    allowed: np.ndarray
    boundary: np.ndarray
    face_ids: Tuple[str, ...]
    error: Optional[str] = None


def _run_trial(polytope: LatticePolytope, N: int, seed: int, trial: int,
               tolerances: Optional[Tolerances]) -> _TrialOutcome:
    rng = rng_stream(seed, trial)
    try:
        if polytope.dim == 1:
            f = sample_poly(polytope, N, rng, seed=seed, draw=(trial, 0))
            zeros = roots_1d(f, rng)[:, None]
        else:
            f = sample_poly(polytope, N, rng, seed=seed, draw=(trial, 0))
            g = sample_poly(polytope, N, rng, seed=seed, draw=(trial, 1))
            zeros = zeros_2d(f, g, rng)
        s = np.log(np.abs(zeros) ** 2)
        batch = classify(polytope, s, tolerances)
    except NumericError as exc:
        log.warning('trial %d failed: %s', trial, exc)
        return _TrialOutcome(np.empty((0, polytope.dim)), np.empty((0, polytope.dim)),
                             np.empty(0, bool), np.empty(0, bool), (), type(exc).__name__)
    face_ids = tuple(batch.faces[i].id for i in batch.face_index)
    return _TrialOutcome(zeros, s, batch.allowed & ~batch.transition, batch.transition, face_ids)


def zero_statistics(
        polytope: LatticePolytope,
        N: int,
        trials: int,
        seed: int,
        threads: int = 1,
        bins: int = 40,
        tolerances: Optional[Tolerances] = None) -> ZeroStats:
    """
    Zero counts and allowed-region fractions over independent trials.

    Zeros flagged as transition points go to a boundary bucket and do not enter
    the fractions. For m = 1 the pooled ``log|z|^2`` values are compared with the
    finite-N and the limit distribution functions by their KS distance.
    """
    m = polytope.dim
    if m not in (1, 2):
        raise DimensionUnsupported('zero statistics need m in (1, 2)', dim=m)
    if trials < 1:
        raise ConfigError('trials must be positive')
    Np = N * polytope.p
    stats = ZeroStats(
        dim=m, N=N, trials=trials, seed=seed,
        expected_count=int(math.factorial(m) * volume(polytope) * N ** m),
        bezout_bound=Np ** m)

    def run(trial: int) -> _TrialOutcome:
        return _run_trial(polytope, N, seed, trial, tolerances)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = list(pool.map(run, range(trials)))

    failures = Counter()
    pooled = []
    for trial, outcome in enumerate(outcomes):
        if outcome.error:
            failures[outcome.error] += 1
            stats.counts.append(None)
            stats.allowed_fractions.append(None)
            continue
        stats.counts.append(len(outcome.zeros))
        classified = int(outcome.allowed.sum() + (~outcome.allowed & ~outcome.boundary).sum())
        stats.allowed_fractions.append(
            float(outcome.allowed.sum()) / classified if classified else None)
        stats.boundary_count += int(outcome.boundary.sum())
        pooled.append(outcome.s)
        if m == 2:
            for z, s, face_id, allowed, boundary in zip(
                    outcome.zeros, outcome.s, outcome.face_ids, outcome.allowed, outcome.boundary):
                stats.points.append(dict(
                    trial=trial, z1=z[0], z2=z[1], s1=float(s[0]), s2=float(s[1]), face=face_id,
                    bucket='boundary' if boundary else ('allowed' if allowed else 'forbidden')))
    stats.failures = dict(sorted(failures.items()))

    if m == 1 and pooled:
        values = np.concatenate(pooled)[:, 0]
        stats.s_values = values
        histogram_counts, edges = np.histogram(values, bins=bins)
        stats.histogram = (edges.tolist(), histogram_counts.tolist())
        stats.ks_distance = float(kstest(values, lambda s: expected_zero_cdf(polytope, N, s)).statistic)
        stats.ks_distance_limit = float(
            kstest(values, lambda s: limit_zero_cdf(polytope, s, tolerances)).statistic)
    log.info('%d/%d trials completed, allowed fraction %.4f', stats.completed, trials, stats.allowed_mean)
    return stats
