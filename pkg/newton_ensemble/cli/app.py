import sys
from enum import Enum
from typing import List, Optional

from newton_ensemble import __version__
from newton_ensemble.cli import handlers
from newton_ensemble.cli.commandline import CommandLine
from newton_ensemble.config import LATTICE_CAP_DEFAULT, THREADS_ENV

__all__ = [
    'NewtonEnsembleAction',
    'NewtonEnsemble',
    'main',
]


class NewtonEnsembleAction(Enum):
    INFO = 'info'
    REGIONS = 'regions'
    DECAY = 'decay'
    MASS = 'mass'
    CONVERGE = 'converge'
    MC_ZEROS = 'mc-zeros'
    AMOEBA = 'amoeba'
    ORACLE_CHECK = 'oracle-check'
    VALIDATE = 'validate'


def program_name() -> str:
    return 'newton-ensemble'


class NewtonEnsemble:

    DEFAULT_CONFIG = dict(
        output_format='csv',
        seed=0,
        coords='log',
        lattice_cap=LATTICE_CAP_DEFAULT,
    )

    PARSER_CONFIG_DEFAULT = dict(
        prog=program_name(),
        description='Conditional Szegő kernels, decay functions and zero statistics of random '
                    'polynomials with a given Newton polytope',
        add_help=True,
        usage=None,
        conflict_handler='resolve'
    )

    ARG_SPEC = {
        'output': dict(
            flags=['-o', '--output'],
            help='output file, stdout when absent'),
        'format': dict(
            flags=['-f', '--format'],
            help='output format',
            choices=['csv', 'json'],
            default=DEFAULT_CONFIG['output_format']),
        'seed': dict(
            flags=['--seed'],
            help='64-bit seed of the random streams',
            type=int,
            default=DEFAULT_CONFIG['seed']),
        'threads': dict(
            flags=['--threads'],
            help='worker threads, default from %s or 1' % THREADS_ENV,
            type=int),
        'deterministic': dict(
            flags=['--deterministic'],
            action='store_true',
            help='omit the timestamp from the provenance header',
            default=False),
        'coords': dict(
            flags=['--coords'],
            help='coordinates of points and grids: log|z_j|^2 or |z_j|',
            choices=['log', 'moduli'],
            default=DEFAULT_CONFIG['coords']),
        'allow_non_delzant': dict(
            flags=['--allow-non-delzant'],
            action='store_true',
            help='admit non-Delzant polytopes for polytope queries (info)',
            default=False),
        'lattice_cap': dict(
            flags=['--lattice-cap'],
            help='largest number of lattice points of NP',
            type=int,
            default=DEFAULT_CONFIG['lattice_cap']),
        'tol_residual': dict(
            flags=['--tol-residual'],
            help='accepted residual of a face solve',
            type=float),
        'tol_cone': dict(
            flags=['--tol-cone'],
            help='lower bound on normal cone coefficients',
            type=float),
        'tol_face': dict(
            flags=['--tol-face'],
            help='lower bound on inactive facet slacks',
            type=float),
        'tol_transition': dict(
            flags=['--tol-transition'],
            help='slack below which points are transition points',
            type=float),
        'tol_hessian_step': dict(
            flags=['--tol-hessian-step'],
            help='finite difference step of the Hessian of u_infinity',
            type=float),
        'tol_rank': dict(
            flags=['--tol-rank'],
            help='relative eigenvalue threshold of the numerical rank',
            type=float),
        'verbose': dict(
            flags=['-v', '--verbose'],
            action='count',
            help='log progress (-v) or details (-vv) to stderr',
            default=0),
        'quiet': dict(
            flags=['-q', '--quiet'],
            action='store_true',
            help='log errors only',
            default=False),
    }

    def __init__(self):
        self.commandline = CommandLine(NewtonEnsemble.PARSER_CONFIG_DEFAULT, NewtonEnsemble.ARG_SPEC)
        self.commandline.parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
        self.factory = handlers.HandlerFactory()
        self.__register_handlers()

    def __register_handlers(self):
        # polytope and limit quantities
        self.__register(NewtonEnsembleAction.INFO, handlers.InfoHandler,
                        'Vertices, facets, Delzant certificate, volume and faces of a polytope')
        self.__register(NewtonEnsembleAction.REGIONS, handlers.RegionsHandler,
                        'Allowed and forbidden regions, b, q and tau over a grid')
        self.__register(NewtonEnsembleAction.DECAY, handlers.DecayHandler,
                        'Decay function b, u_infinity and grad b at a point or over a grid')
        # finite N
        self.__register(NewtonEnsembleAction.MASS, handlers.MassHandler,
                        'Conditional Szegő kernel diagonal over a grid')
        self.__register(NewtonEnsembleAction.CONVERGE, handlers.ConvergeHandler,
                        'Convergence of -(1/N) log Pi to b')
        # Monte Carlo
        self.__register(NewtonEnsembleAction.MC_ZEROS, handlers.ZerosHandler,
                        'Zero statistics of random polynomials')
        self.__register(NewtonEnsembleAction.AMOEBA, handlers.AmoebaHandler,
                        'Amoeba points and free tentacles of random plane curves')
        # checks
        self.__register(NewtonEnsembleAction.ORACLE_CHECK, handlers.OracleCheckHandler,
                        'Compare the region solver with closed forms')
        self.__register(NewtonEnsembleAction.VALIDATE, handlers.ValidateHandler,
                        'Re-parse emitted CSV/JSON files')

    def __register(self, action: NewtonEnsembleAction, handler_class, help_text: str):
        self.commandline.register_handler(
            action.value,
            self.factory.handler(handler_class.__name__),
            arguments=handler_class.ARG_SPEC,
            help=help_text)

    def run(self, argv: Optional[List[str]] = None) -> int:
        return self.commandline.run(argv)


def main(argv: Optional[List[str]] = None) -> int:
    return NewtonEnsemble().run(argv)


if __name__ == '__main__':
    sys.exit(main())
