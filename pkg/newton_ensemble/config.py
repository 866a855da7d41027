import dataclasses
import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from newton_ensemble.errors import ConfigError, GridSpecError

__all__ = [
    'Tolerances',
    'GridSpec',
    'RunConfig',
    'THREADS_ENV',
    'LATTICE_CAP_DEFAULT',
    'default_threads',
]

log = logging.getLogger(__name__)

THREADS_ENV = 'NEWTON_ENSEMBLE_THREADS'
LATTICE_CAP_DEFAULT = 10 ** 7


@dataclass(frozen=True)
class Tolerances:
    """
    Numeric thresholds of the region solver and the Hessian stencils.

    :param residual: accepted stationarity residual of a face solve
    :param cone: lower bound on normal cone coefficients
    :param face: lower bound on inactive facet slacks
    :param transition: slack below which a point is flagged as a transition point
    :param hessian_step: central difference step for the Hessian of u_infinity
    :param rank: relative eigenvalue threshold for the numerical rank
    :param max_newton: Newton iteration cap per face
    :param newton_target: gradient norm at which Newton stops early
    """
    residual: float = 1e-10
    cone: float = 1e-9
    face: float = 1e-9
    transition: float = 1e-7
    hessian_step: float = 1e-4
    rank: float = 1e-6
    max_newton: int = 100
    newton_target: float = 1e-13

    def replace(self, **overrides) -> 'Tolerances':
        known = {f.name for f in dataclasses.fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(
                'unknown tolerance(s): %s' % ', '.join(sorted(unknown)),
                known=sorted(known))
        return dataclasses.replace(
            self,
            **{key: value for key, value in overrides.items() if value is not None})


@dataclass(frozen=True)
class GridSpec:
    """
    Rectangular grid in s-coordinates, one ``(start, stop, count)`` per axis.

    The textual form is ``a:b:n`` per axis, axes joined by ``x``:

        ..code::

            -3:3:61x-3:3:61
    """
    axes_spec: Tuple[Tuple[float, float, int], ...]

    @staticmethod
    def parse(text: str) -> 'GridSpec':
        axes_spec = []
        for axis_text in text.strip().split('x'):
            parts = axis_text.split(':')
            if len(parts) != 3:
                raise GridSpecError('malformed grid axis %r, expected a:b:n' % axis_text)
            try:
                start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            except ValueError as exc:
                raise GridSpecError('malformed grid axis %r: %s' % (axis_text, exc))
            if count < 2:
                raise GridSpecError('grid axis %r needs at least 2 points' % axis_text)
            if not stop > start:
                raise GridSpecError('grid axis %r has an empty range' % axis_text)
            axes_spec.append((start, stop, count))
        return GridSpec(tuple(axes_spec))

    @property
    def dim(self) -> int:
        return len(self.axes_spec)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(count for _, _, count in self.axes_spec)

    def axes(self) -> List[np.ndarray]:
        return [np.linspace(start, stop, count) for start, stop, count in self.axes_spec]

    def points(self) -> np.ndarray:
        """Grid points as an (n, m) array in C order (last axis fastest)."""
        mesh = np.meshgrid(*self.axes(), indexing='ij')
        return np.stack([axis.ravel() for axis in mesh], axis=1)

    def __str__(self):
        return 'x'.join('%g:%g:%d' % axis for axis in self.axes_spec)


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        threads = int(value)
    except ValueError:
        raise ConfigError('%s must be an integer, got %r' % (THREADS_ENV, value))
    if threads < 1:
        raise ConfigError('%s must be positive, got %d' % (THREADS_ENV, threads))
    return threads


@dataclass
class RunConfig:
    """Everything a subcommand needs besides its own parameters."""
    polytope_path: Optional[str] = None
    output: Optional[str] = None
    output_format: str = 'csv'
    threads: int = 1
    seed: int = 0
    deterministic: bool = False
    coords: str = 'log'
    allow_non_delzant: bool = False
    lattice_cap: int = LATTICE_CAP_DEFAULT
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.output_format not in ('csv', 'json'):
            raise ConfigError('unsupported output format %r' % self.output_format)
        if self.coords not in ('log', 'moduli'):
            raise ConfigError('unsupported coordinates %r' % self.coords)
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError('seed must be a 64-bit unsigned value, got %d' % self.seed)
        if self.threads < 1:
            raise ConfigError('threads must be positive, got %d' % self.threads)
