import argparse
import logging
import os
from abc import abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from newton_ensemble import amoeba, asymptotics, ensemble, oracles, region, szego
from newton_ensemble.cli.arguments import float_list, int_range
from newton_ensemble.cli.commandline import CommandHandler, config_echo
from newton_ensemble.cli.output import Report, provenance, validate, write_report
from newton_ensemble.config import GridSpec, RunConfig, Tolerances, default_threads
from newton_ensemble.errors import (
    EXIT_FAILED,
    EXIT_OK,
    ArtifactError,
    ConfigError,
    GridSpecError,
    NonDelzant,
)
from newton_ensemble.geometry import mu_sigma, s_from_moduli, softplus_logsum
from newton_ensemble.polytope import (
    LatticePolytope,
    boundary_decomposition,
    is_delzant,
    lattice_points,
    volume,
)

__all__ = [
    'HandlerContext',
    'OracleRow',
    'oracle_comparison',
    'HandlerFactory',
]

log = logging.getLogger(__name__)

TOLERANCE_FLAGS = ('residual', 'cone', 'face', 'transition', 'hessian_step', 'rank')

GREEN = 'fg:ansigreen'
RED = 'fg:ansired'
BOLD = 'bold'

POLYTOPE_ARG = dict(help='polytope file (JSON with "vertices" and optional "p")')


class HandlerContext:
    """Run configuration and the polytope of the current command."""

    def __init__(self):
        self.config: Optional[RunConfig] = None

    def configure(self, command_args: argparse.Namespace) -> RunConfig:
        overrides = {name: getattr(command_args, 'tol_' + name, None) for name in TOLERANCE_FLAGS}
        threads = command_args.threads if command_args.threads is not None else default_threads()
        self.config = RunConfig(
            polytope_path=getattr(command_args, 'polytope', None),
            output=command_args.output,
            output_format=command_args.format,
            threads=threads,
            seed=command_args.seed,
            deterministic=command_args.deterministic,
            coords=command_args.coords,
            allow_non_delzant=command_args.allow_non_delzant,
            lattice_cap=command_args.lattice_cap,
            tolerances=Tolerances().replace(**overrides))
        return self.config

    def polytope(self, query_only: bool = False) -> LatticePolytope:
        """
        Loads the polytope file of the command.

        :param query_only: the command only needs polytope queries, so
            ``--allow-non-delzant`` may admit a non-Delzant polytope
        :raises NonDelzant: unless the polytope is Delzant or admitted
        """
        polytope = LatticePolytope.from_json(self.config.polytope_path)
        certificate = is_delzant(polytope)
        if not certificate:
            if query_only and self.config.allow_non_delzant:
                log.warning('polytope is not Delzant (%s), continuing with queries only', certificate.reason)
            else:
                raise NonDelzant(
                    'polytope is not Delzant: %s' % certificate.reason,
                    vertex=certificate.vertex, path=self.config.polytope_path)
        return polytope

    def grid(self, text: str, dim: int) -> np.ndarray:
        """Grid points in s-coordinates; ``--coords moduli`` grids hold ``|z_j|``."""
        grid = GridSpec.parse(text)
        if grid.dim != dim:
            raise GridSpecError('grid has %d axes for a polytope of dimension %d' % (grid.dim, dim),
                                grid=str(grid))
        return self.coordinates(grid.points())

    def coordinates(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.config.coords == 'moduli':
            return s_from_moduli(points)
        return points

    def point(self, values: Sequence[float], dim: int) -> np.ndarray:
        if len(values) != dim:
            raise ConfigError('point has %d coordinates for a polytope of dimension %d' % (len(values), dim))
        return self.coordinates(values)[0]


def _s_columns(m: int) -> tuple:
    return tuple('s%d' % (j + 1) for j in range(m))


def _vector_columns(name: str, m: int) -> tuple:
    return tuple('%s%d' % (name, j + 1) for j in range(m))


# Base class of the subcommands: configure, then run
class AbstractHandler(CommandHandler):
    ARG_SPEC = {}

    def __init__(self, context: HandlerContext):
        self.context = context

    def handle(self, command_args) -> Optional[Report]:
        return self.run(command_args, self.context.configure(command_args))

    @abstractmethod
    def run(self, command_args, config: RunConfig) -> Optional[Report]:
        NotImplemented


# ====
# Info
# ====

class InfoHandler(AbstractHandler):
    """
    Vertices, facets, Delzant certificate, volume, p and the face table.
    """
    ARG_SPEC = {
        'polytope': POLYTOPE_ARG,
    }

    def run(self, command_args, config: RunConfig) -> Report:
        polytope = self.context.polytope(query_only=True)
        certificate = is_delzant(polytope)
        vol = volume(polytope)
        data = dict(
            polytope=polytope.to_dict(),
            delzant=dict(ok=certificate.ok, vertex=certificate.vertex, reason=certificate.reason),
            volume=vol,
            degree=polytope.degree)
        if polytope.dim == 2:
            decomposition = boundary_decomposition(polytope)
            data['boundary'] = dict(
                segments={facet: segment for facet, segment in decomposition.segments.items()},
                length=decomposition.length,
                interior_faces=[face.id for face in decomposition.interior],
                exterior_faces=[face.id for face in decomposition.exterior])
        rows = [(face.id, face.dim, face.label, list(face.active), [list(v) for v in face.vertices],
                 [str(c) for c in face.sample])
                for face in polytope.faces]
        return Report(
            command='info',
            columns=('face', 'dim', 'label', 'active', 'vertices', 'sample'),
            rows=rows,
            data=data,
            summary=[
                (BOLD, '%d vertices, %d facets, p=%d, Vol %s, ' % (
                    len(polytope.vertices), len(polytope.facets), polytope.p, vol)),
                (GREEN if certificate else RED, 'Delzant: %s' % ('true' if certificate else 'false')),
                ('', '\n')])


# =======
# Regions
# =======

class RegionsHandler(AbstractHandler):
    """Face, b, q and tau over a grid, optionally with the rank of the Hessian of u_infinity."""
    ARG_SPEC = {
        'polytope': POLYTOPE_ARG,
        'grid': dict(
            flags=['-g', '--grid'],
            help='grid a:b:n per axis, axes joined by x',
            required=True),
        'rank': dict(
            flags=['--rank'],
            action='store_true',
            help='add the numerical rank of the Hessian of u_infinity',
            default=False),
    }

    def run(self, command_args, config: RunConfig) -> Report:
        polytope = self.context.polytope()
        m = polytope.dim
        points = self.context.grid(command_args.grid, m)
        log.info('classifying %d grid points', len(points))
        batch = region.classify(polytope, points, config.tolerances)
        columns = _s_columns(m) + ('face', 'face_dim', 'allowed', 'transition', 'b') \
            + _vector_columns('q', m) + _vector_columns('tau', m)
        ranks = None
        if command_args.rank:
            _, ranks, _ = region.psi_hessian_batch(polytope, points, tolerances=config.tolerances)
            columns += ('rank',)
        rows = []
        for i, s in enumerate(points):
            row = list(s) + [batch.faces[batch.face_index[i]].id, int(batch.face_dims[i]),
                             bool(batch.allowed[i]), bool(batch.transition[i]), float(batch.b[i])] \
                + list(batch.q[i]) + list(batch.tau[i])
            if ranks is not None:
                row.append(int(ranks[i]))
            rows.append(row)
        counts = {face.id: int((batch.face_index == k).sum()) for k, face in enumerate(batch.faces)}
        return Report(
            command='regions',
            columns=columns,
            rows=rows,
            data=dict(
                faces={face.id: dict(dim=face.dim, label=face.label, points=counts[face.id])
                       for face in batch.faces},
                transition_points=int(batch.transition.sum())))


# =====
# Decay
# =====

class DecayHandler(AbstractHandler):
    """b, u_infinity and grad b at a point or over a grid; optionally b as a path integral."""
    ARG_SPEC = {
        'polytope': POLYTOPE_ARG,
        's': dict(
            flags=['-s', '--s'],
            help='point s1,s2,... (exclusive with --grid)',
            type=float_list),
        'grid': dict(
            flags=['-g', '--grid'],
            help='grid a:b:n per axis, axes joined by x'),
        'action': dict(
            flags=['--action'],
            help='also integrate b along the normal flow with this many Simpson steps',
            type=int,
            metavar='<steps>'),
    }

    def run(self, command_args, config: RunConfig) -> Report:
        polytope = self.context.polytope()
        m = polytope.dim
        if (command_args.s is None) == (command_args.grid is None):
            raise ConfigError('decay needs exactly one of --s and --grid')
        if command_args.grid is not None:
            points = self.context.grid(command_args.grid, m)
        else:
            points = self.context.point(command_args.s, m)[None, :]
        batch = region.classify(polytope, points, config.tolerances)
        u = polytope.p * softplus_logsum(points) - batch.b
        gradient = polytope.p * mu_sigma(points) - batch.q
        columns = _s_columns(m) + ('face', 'b', 'u_infty') + _vector_columns('grad_b', m)
        if command_args.action:
            columns += ('b_action',)
        rows = []
        for i, s in enumerate(points):
            row = list(s) + [batch.faces[batch.face_index[i]].id, float(batch.b[i]), float(u[i])] \
                + list(gradient[i])
            if command_args.action:
                row.append(region.decay_b_action(polytope, s, command_args.action, config.tolerances))
            rows.append(row)
        return Report(command='decay', columns=columns, rows=rows)


# ====
# Mass
# ====

class MassHandler(AbstractHandler):
    """
    Kernel diagonal over a grid; ``quarter_kernel`` is the surface
    ``(1/4) E |f(z)|^2_FS`` of the random polynomial.
    """
    ARG_SPEC = {
        'polytope': POLYTOPE_ARG,
        'N': dict(
            flags=['-N', '--N'],
            help='degree multiple N of the polytope',
            type=int,
            required=True),
        'grid': dict(
            flags=['-g', '--grid'],
            help='grid a:b:n per axis, axes joined by x',
            required=True),
        'samples': dict(
            flags=['--samples'],
            help='also average |f(z)|^2_FS over this many random polynomials',
            type=int,
            default=0),
    }

    def run(self, command_args, config: RunConfig) -> Report:
        polytope = self.context.polytope()
        m, N = polytope.dim, command_args.N
        points = self.context.grid(command_args.grid, m)
        log.info('kernel diagonal at N=%d over %d points', N, len(points))
        log_kernel = szego.kernel_diag_batch(polytope, N, points, cap=config.lattice_cap)
        kernel = np.exp(log_kernel)
        term_count = len(lattice_points(polytope, N, config.lattice_cap))
        columns = _s_columns(m) + ('log_kernel', 'kernel', 'quarter_kernel', 'density')
        sampled = None
        if command_args.samples > 0:
            sampled = self.sampled_mass(polytope, N, points, command_args.samples, config.seed)
            columns += ('sample_mean',)
        rows = []
        for i, s in enumerate(points):
            row = list(s) + [float(log_kernel[i]), float(kernel[i]), 0.25 * float(kernel[i]),
                             float(kernel[i]) / term_count]
            if sampled is not None:
                row.append(float(sampled[i]))
            rows.append(row)
        return Report(command='mass', columns=columns, rows=rows,
                      data=dict(N=N, lattice_points=term_count))

    @staticmethod
    def sampled_mass(polytope, N, points, samples, seed) -> np.ndarray:
        z = np.exp(0.5 * points).astype(complex)
        total = np.zeros(len(points))
        for k in range(samples):
            f = ensemble.sample_poly(polytope, N, ensemble.rng_stream(seed, k), seed=seed, draw=(k,))
            total += np.exp([ensemble.fs_mass_log(f, point) for point in z])
        return total / samples


# ========
# Converge
# ========

def default_degrees(n_max: int, count: int = 8) -> tuple:
    start = min(10, n_max)
    return tuple(sorted({int(round(n)) for n in np.geomspace(start, n_max, count)}))


class ConvergeHandler(AbstractHandler):
    """-(1/N) log Pi against b over N, with the fitted prefactor exponent."""
    ARG_SPEC = {
        'polytope': POLYTOPE_ARG,
        's': dict(
            flags=['-s', '--s'],
            help='point s1,s2,...',
            type=float_list,
            required=True),
        'Nmax': dict(
            flags=['--Nmax'],
            help='largest N, with geometrically spaced N from 10',
            type=int,
            default=200),
        'Ns': dict(
            flags=['--Ns'],
            help='explicit N values, list or start:stop:step',
            type=int_range),
    }

    def run(self, command_args, config: RunConfig) -> Report:
        polytope = self.context.polytope()
        s = self.context.point(command_args.s, polytope.dim)
        Ns = command_args.Ns or default_degrees(command_args.Nmax)
        if len(Ns) < 2 or min(Ns) < 1:
            raise ConfigError('converge needs at least two positive N values', Ns=list(Ns))
        rows = asymptotics.convergence_table(polytope, s, Ns, config.tolerances, config.lattice_cap)
        result = region.solve_region(polytope, s, config.tolerances)
        data = dict(
            s=s,
            face=result.face.id,
            face_dim=result.face.dim,
            b=result.b,
            growth_exponent=asymptotics.growth_exponent(polytope, s, Ns, config.lattice_cap))
        if result.allowed:
            fit = asymptotics.allowed_deficit(polytope, s, Ns, config.lattice_cap)
            data.update(deficits=fit.deficits, deficit_rate=fit.rate, geometric=fit.geometric)
        else:
            data['prefactor_exponent'] = asymptotics.prefactor_exponent(
                polytope, s, Ns, config.tolerances, config.lattice_cap)
        return Report(
            command='converge',
            columns=('N', 'log_kernel', 'rate', 'corrected_rate', 'b'),
            rows=[(row.N, row.log_kernel, row.rate, row.corrected_rate, row.target) for row in rows],
            data=data)


# ========
# MC zeros
# ========

class ZerosHandler(AbstractHandler):
    """Monte Carlo zero statistics; histogram rows for m = 1, zero rows for m = 2."""
    ARG_SPEC = {
        'polytope': POLYTOPE_ARG,
        'N': dict(
            flags=['-N', '--N'],
            help='degree multiple N of the polytope',
            type=int,
            required=True),
        'trials': dict(
            flags=['-t', '--trials'],
            help='number of independent samples',
            type=int,
            default=100),
        'bins': dict(
            flags=['--bins'],
            help='histogram bins of log|z|^2 (m = 1)',
            type=int,
            default=40),
        'dim': dict(
            flags=['--dim'],
            help='expected dimension of the polytope, checked against the file',
            type=int,
            choices=[1, 2]),
    }

    def run(self, command_args, config: RunConfig) -> Report:
        polytope = self.context.polytope()
        if command_args.dim is not None and command_args.dim != polytope.dim:
            raise ConfigError('--dim %d does not match the polytope dimension %d' % (command_args.dim, polytope.dim),
                              path=config.polytope_path)
        log.info('%d trials at N=%d on %d threads', command_args.trials, command_args.N, config.threads)
        stats = ensemble.zero_statistics(
            polytope, command_args.N, command_args.trials, config.seed,
            threads=config.threads, bins=command_args.bins, tolerances=config.tolerances)
        if stats.dim == 1:
            edges, counts = stats.histogram
            columns = ('s_low', 's_high', 'count')
            rows = [(lo, hi, count) for lo, hi, count in zip(edges, edges[1:], counts)]
        else:
            columns = ('trial', 'z1', 'z2', 's1', 's2', 'face', 'bucket')
            rows = [tuple(point[key] for key in columns) for point in stats.points]
        summary = [(BOLD, '%d/%d trials, ' % (stats.completed, stats.trials)),
                   ('', 'count = %d in %.1f%% of trials' % (stats.expected_count, 100 * stats.kouchnirenko_rate))]
        if stats.ks_distance is not None:
            summary.append(('', ', KS %.4f (limit %.4f)' % (stats.ks_distance, stats.ks_distance_limit)))
        summary.append(('', '\n'))
        return Report(command='mc-zeros', columns=columns, rows=rows, data=stats.to_dict(), summary=summary)


# ======
# Amoeba
# ======

class AmoebaHandler(AbstractHandler):
    """
    Free tentacles per facet of pΣ over independent samples. With
    ``--points-grid`` the amoeba points of the first sample are also written, as
    CSV, to ``--points-output`` or next to ``--output``.
    """
    ARG_SPEC = {
        'polytope': POLYTOPE_ARG,
        'N': dict(
            flags=['-N', '--N'],
            help='degree multiple N of the polytope',
            type=int,
            required=True),
        'trials': dict(
            flags=['-t', '--trials'],
            help='number of independent samples',
            type=int,
            default=50),
        'points_grid': dict(
            flags=['--points-grid'],
            help='log|z1|^2 values a:b:n of the amoeba slices'),
        'points_output': dict(
            flags=['--points-output'],
            help='CSV file of the amoeba points, default <output>.points.csv'),
        'phases': dict(
            flags=['--phases'],
            help='arguments of z1 per slice',
            type=int,
            default=16),
    }

    @staticmethod
    def points_path(command_args) -> Optional[str]:
        if command_args.points_grid is None:
            return None
        if command_args.points_output:
            return command_args.points_output
        if command_args.output:
            return os.path.splitext(command_args.output)[0] + '.points.csv'
        raise ConfigError('--points-grid needs --output or --points-output')

    def points_report(self, polytope, command_args, config: RunConfig) -> Report:
        grid = GridSpec.parse(command_args.points_grid)
        if grid.dim != 1:
            raise GridSpecError('amoeba slices need a one axis grid', grid=str(grid))
        s1 = grid.axes()[0]
        if config.coords == 'moduli':
            s1 = s_from_moduli(s1)
        N = command_args.N
        f = ensemble.sample_poly(polytope, N, ensemble.rng_stream(config.seed, 0), seed=config.seed, draw=(0, 0))
        sample = amoeba.amoeba_points(f, s1, command_args.phases, ensemble.rng_stream(config.seed, 0, 2))
        return Report(
            command='amoeba',
            columns=('log_abs_z1', 'log_abs_z2', 'z1', 'z2'),
            rows=[(x, y, z[0], z[1]) for (x, y), z in zip(sample.points, sample.zeros)],
            data=dict(N=N, points=len(sample)))

    def run(self, command_args, config: RunConfig) -> Report:
        polytope = self.context.polytope()
        N = command_args.N
        points_path = self.points_path(command_args)
        results = amoeba.tentacle_trials(polytope, N, command_args.trials, config.seed,
                                         threads=config.threads, tolerances=config.tolerances)
        rows = []
        for trial, stats in enumerate(results):
            for facet, entry in stats.per_facet.items():
                segment = entry.segment or (None, None)
                rows.append((trial, facet.value, entry.count, entry.allowed, segment[0], segment[1]))
        length = results[0].length if results else 0
        mean = float(np.mean([stats.nu_at for stats in results])) / N if results else float('nan')
        data = dict(N=N, trials=len(results), length=length, mean_allowed_per_N=mean,
                    totals=[stats.total for stats in results])
        if points_path:
            points = self.points_report(polytope, command_args, config)
            header = provenance('amoeba', config_echo(command_args), config.seed, config.deterministic)
            write_report(points, header, 'csv', points_path)
            data.update(points=points.data['points'], points_file=points_path)
        return Report(
            command='amoeba',
            columns=('trial', 'facet', 'tentacles', 'allowed', 'segment_low', 'segment_high'),
            rows=rows,
            data=data,
            summary=[(BOLD, 'mean allowed tentacles / N = %.4f' % mean),
                     ('', ' (boundary length %d)\n' % length)])


# ============
# Oracle check
# ============

@dataclass(frozen=True)
class OracleRow:
    case: str
    metric: str
    max_error: float
    tolerance: float
    points: int

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


def oracle_comparison(
        case: oracles.OracleCase,
        grid: GridSpec,
        margin: float = 0.01,
        tolerances: Optional[Tolerances] = None,
        hessian_tolerance: float = 1e-5) -> List[OracleRow]:
    """
    Compares the region solver with the closed forms of one case at the grid
    points farther than ``margin`` from every interface.

    Region and rank rows count mismatches; b and Hessian rows give the largest
    absolute deviation.
    """
    polytope = case.polytope()
    points = grid.points()
    expected = [case.evaluate(s) for s in points]
    keep = np.array([result.interface_distance > margin for result in expected])
    points = points[keep]
    expected = [result for result, kept in zip(expected, keep) if kept]
    if not len(points):
        raise GridSpecError('no grid point clears the interface margin', case=case.name)

    batch = region.classify(polytope, points, tolerances)
    hessians, ranks, _ = region.psi_hessian_batch(polytope, points, tolerances=tolerances)
    oracle_dims = np.array([case.ranks[result.label] for result in expected])
    oracle_b = np.array([result.b for result in expected])
    oracle_hessians = np.array([result.hessian for result in expected])

    region_mismatch = (batch.face_dims != oracle_dims) | batch.transition \
        | (batch.allowed != (oracle_dims == polytope.dim))
    count = len(points)
    rows = [
        OracleRow(case.name, 'region', float(region_mismatch.sum()), 0.0, count),
        OracleRow(case.name, 'b', float(np.abs(batch.b - oracle_b).max()), 1e-8, count),
        OracleRow(case.name, 'hessian', float(np.abs(hessians - oracle_hessians).max()), hessian_tolerance, count),
        OracleRow(case.name, 'rank', float((ranks != oracle_dims).sum()), 0.0, count),
    ]
    for row in rows:
        log.info('%s %s: %.3g (tolerance %.3g) over %d points',
                 row.case, row.metric, row.max_error, row.tolerance, row.points)
    return rows


class OracleCheckHandler(AbstractHandler):
    """Closed form comparisons; exits 0 when every check passes and 1 otherwise."""
    ARG_SPEC = {
        'cases': dict(
            flags=['-c', '--cases'],
            help='comma separated cases among %s' % ', '.join(oracles.ORACLE_CASES),
            default=','.join(oracles.ORACLE_CASES)),
        'grid': dict(
            flags=['-g', '--grid'],
            help='grid a:b:n per axis, axes joined by x',
            default='-4:4:40x-4:4:40'),
        'margin': dict(
            flags=['--margin'],
            help='minimal distance to an interface in s',
            type=float,
            default=0.01),
    }

    def run(self, command_args, config: RunConfig) -> Report:
        names = [name.strip() for name in command_args.cases.split(',') if name.strip()]
        unknown = [name for name in names if name not in oracles.ORACLE_CASES]
        if unknown:
            raise ConfigError('unknown oracle case(s): %s' % ', '.join(unknown),
                              known=list(oracles.ORACLE_CASES))
        grid = GridSpec.parse(command_args.grid)
        if grid.dim != 2:
            raise GridSpecError('oracle grids are two dimensional', grid=str(grid))
        rows = []
        for name in names:
            rows.extend(oracle_comparison(oracles.ORACLE_CASES[name], grid, command_args.margin, config.tolerances))
        passed = all(row.passed for row in rows)
        summary = []
        for row in rows:
            summary.append((GREEN if row.passed else RED, '%-5s' % ('ok' if row.passed else 'FAIL')))
            summary.append(('', ' %-12s %-8s %.3g\n' % (row.case, row.metric, row.max_error)))
        return Report(
            command='oracle-check',
            columns=('case', 'metric', 'max_error', 'tolerance', 'points', 'passed'),
            rows=[(row.case, row.metric, row.max_error, row.tolerance, row.points, row.passed) for row in rows],
            data=dict(passed=passed),
            exit_status=EXIT_OK if passed else EXIT_FAILED,
            summary=summary)


# ========
# Validate
# ========

class ValidateHandler(AbstractHandler):
    """Re-parses emitted files; exits 1 when one of them does not parse."""
    ARG_SPEC = {
        'files': dict(
            help='CSV or JSON files written by this tool',
            nargs='+',
            metavar='<file>'),
    }

    def run(self, command_args, config: RunConfig) -> Report:
        rows, failed = [], 0
        for path in command_args.files:
            try:
                result = validate(path)
                rows.append((path, result.output_format, len(result.columns), result.rows, 'ok'))
            except ArtifactError as exc:
                failed += 1
                log.warning('%s', exc)
                rows.append((path, None, None, None, str(exc)))
        return Report(
            command='validate',
            columns=('file', 'format', 'columns', 'rows', 'status'),
            rows=rows,
            data=dict(failed=failed),
            exit_status=EXIT_FAILED if failed else EXIT_OK)


class HandlerFactory:
    def __init__(self):
        self.context = HandlerContext()

        # initialize handlers
        self.__handlers = {
            handler_class.__name__: handler_class(self.context)
            for handler_class in (InfoHandler, RegionsHandler, DecayHandler, MassHandler, ConvergeHandler,
                                  ZerosHandler, AmoebaHandler, OracleCheckHandler, ValidateHandler)
        }

    def handler(self, name: str) -> CommandHandler:
        return self.__handlers[name]
