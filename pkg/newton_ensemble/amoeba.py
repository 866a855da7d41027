"""
Amoebas of random plane curves and their free tentacles.

A tentacle ending on a facet of pΣ corresponds to a root of the restriction of
f to that facet: set z1 = 0, set z2 = 0, or keep the top degree part in
``w = z2/z1`` for the line at infinity. Each root is classified with the one
dimensional region solver of ``P ∩ facet``.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from newton_ensemble.config import Tolerances
from newton_ensemble.ensemble import (
    TORUS_BOUNDS,
    PolySample,
    coefficient_grid,
    dense_roots,
    rng_stream,
    roots_1d,
    sample_poly,
)
from newton_ensemble.errors import DimensionUnsupported, EmptyRestriction, NumericError
from newton_ensemble.polytope import (
    LatticePolytope,
    SimplexFacet,
    boundary_decomposition,
    from_vertices,
)
from newton_ensemble.region import classify
from newton_ensemble.rootfinding import CERTIFICATE_TOLERANCE

__all__ = [
    'TentacleRecord',
    'AmoebaSample',
    'FacetTentacles',
    'TentacleStats',
    'amoeba_points',
    'restrict_to_facet',
    'tentacle_stats',
    'tentacle_trials',
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TentacleRecord:
    facet: SimplexFacet
    root: complex
    allowed: bool


@dataclass(frozen=True)
class AmoebaSample:
    points: np.ndarray
    zeros: np.ndarray
    tentacles: Tuple[TentacleRecord, ...] = ()

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class FacetTentacles:
    facet: SimplexFacet
    count: int
    allowed: int
    segment: Optional[Tuple[int, int]]


@dataclass(frozen=True)
class TentacleStats:
    N: int
    per_facet: Dict[SimplexFacet, FacetTentacles]
    records: Tuple[TentacleRecord, ...]
    length: int

    @property
    def nu_at(self) -> int:
        return sum(entry.allowed for entry in self.per_facet.values())

    @property
    def total(self) -> int:
        return sum(entry.count for entry in self.per_facet.values())

    def to_dict(self) -> dict:
        return dict(
            N=self.N, nu_at=self.nu_at, total=self.total, length=self.length,
            facets={facet.value: dict(count=entry.count, allowed=entry.allowed,
                                      segment=list(entry.segment) if entry.segment else None)
                    for facet, entry in self.per_facet.items()})


def amoeba_points(
        f: PolySample,
        s1_grid: Sequence[float],
        phases: int = 16,
        rng: Optional[np.random.Generator] = None) -> AmoebaSample:
    """
    Points ``(log|z1|, log|z2|)`` of the curve f = 0 over circles ``|z1|^2 = exp(s1)``.
    """
    if f.dim != 2:
        raise DimensionUnsupported('amoeba sampling needs m = 2', dim=f.dim)
    rng = rng or np.random.default_rng(0)
    F = coefficient_grid(f)
    lo, hi = TORUS_BOUNDS
    points, zeros = [], []
    angles = 2 * np.pi * np.arange(phases) / phases
    for s1 in s1_grid:
        for angle in angles:
            z1 = np.exp(0.5 * s1 + 1j * angle)
            try:
                roots = dense_roots(F @ (z1 ** np.arange(F.shape[1])), rng)
            except NumericError as exc:
                log.debug('slice s1=%g failed: %s', s1, exc)
                continue
            for z2 in roots:
                if not lo < abs(z2) < hi:
                    continue
                z = np.array([z1, z2])
                if f.relative_residual(z) < CERTIFICATE_TOLERANCE:
                    zeros.append(z)
                    points.append(np.log(np.abs(z)))
    return AmoebaSample(
        points=np.array(points, dtype=float).reshape(-1, 2),
        zeros=np.array(zeros, dtype=complex).reshape(-1, 2))


def restrict_to_facet(f: PolySample, facet: SimplexFacet, degree: int) -> PolySample:
    """
    One variable restriction of f to a facet of the simplex of the given degree.

    :raises EmptyRestriction: when the restriction has fewer than two terms
    """
    if facet is SimplexFacet.AXIS_1:
        mask, columns = f.support[:, 0] == 0, [1]
    elif facet is SimplexFacet.AXIS_2:
        mask, columns = f.support[:, 1] == 0, [0]
    else:
        mask, columns = f.support.sum(axis=1) == degree, [1]
    mask = mask & (f.coefficients != 0)
    if mask.sum() < 2:
        raise EmptyRestriction('restriction to %s has no free roots' % facet.value, facet=facet.value)
    return f.restrict(mask, columns)


def tentacle_stats(
        f: PolySample,
        polytope: LatticePolytope,
        N: int,
        rng: Optional[np.random.Generator] = None,
        tolerances: Optional[Tolerances] = None) -> TentacleStats:
    """
    Free tentacles of the amoeba of f per facet of pΣ, and how many end in the
    allowed part of that facet.
    """
    if polytope.dim != 2:
        raise DimensionUnsupported('tentacle statistics need m = 2', dim=polytope.dim)
    rng = rng or np.random.default_rng(0)
    decomposition = boundary_decomposition(polytope)
    per_facet, records = {}, []
    for facet in SimplexFacet:
        segment = decomposition.segments[facet]
        try:
            if segment is None or segment[0] == segment[1]:
                raise EmptyRestriction('facet %s meets P in at most a point' % facet.value)
            restricted = restrict_to_facet(f, facet, N * polytope.p)
        except EmptyRestriction:
            per_facet[facet] = FacetTentacles(facet, 0, 0, segment)
            continue
        roots = roots_1d(restricted, rng)
        edge = from_vertices([[segment[0]], [segment[1]]], p=polytope.p)
        batch = classify(edge, np.log(np.abs(roots) ** 2)[:, None], tolerances)
        allowed = batch.allowed & ~batch.transition
        per_facet[facet] = FacetTentacles(facet, len(roots), int(allowed.sum()), segment)
        records.extend(TentacleRecord(facet, complex(root), bool(flag)) for root, flag in zip(roots, allowed))
    return TentacleStats(N, per_facet, tuple(records), decomposition.length)


def tentacle_trials(
        polytope: LatticePolytope,
        N: int,
        trials: int,
        seed: int,
        threads: int = 1,
        tolerances: Optional[Tolerances] = None) -> List[TentacleStats]:
    """Tentacle statistics of independent samples, in trial order."""

    def run(trial: int) -> TentacleStats:
        rng = rng_stream(seed, trial)
        f = sample_poly(polytope, N, rng, seed=seed, draw=(trial, 0))
        return tentacle_stats(f, polytope, N, rng, tolerances)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(run, range(trials)))
    mean = np.mean([result.nu_at for result in results]) / N
    log.info('mean allowed tentacles per N over %d trials: %.4f (length %d)',
             trials, mean, results[0].length if results else 0)
    return results
