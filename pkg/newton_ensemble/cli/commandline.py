import argparse
import logging
import sys
import time
from abc import ABC, abstractmethod
from typing import List, Mapping, Optional

from prompt_toolkit import print_formatted_text
from prompt_toolkit.formatted_text import FormattedText

from newton_ensemble.cli import arguments, output
from newton_ensemble.cli.output import Report
from newton_ensemble.errors import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, NewtonEnsembleError

__all__ = [
    'CommandHandler',
    'CommandLine',
    'configure_logging',
    'config_echo',
]

log = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# Arguments that change neither results nor their order
_NOT_ECHOED = ('output', 'verbose', 'quiet', 'threads')


# ================
# Command Handling
# ================

# Interface for command handling
class CommandHandler(ABC):

    @abstractmethod
    def handle(self, command_args) -> Optional[Report]:
        NotImplemented


def configure_logging(verbose: int = 0, quiet: bool = False):
    if quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbose, 2)]
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def config_echo(command_args: argparse.Namespace) -> dict:
    return {key: value for key, value in sorted(vars(command_args).items())
            if key not in _NOT_ECHOED}


# ==========
# Main Class
# ==========

class CommandLine:
    """
    Subcommand dispatcher: one argparse subparser and one handler per command.

    Global arguments are added to every subparser, so they may follow the
    command name. Handlers return a .Report, which is written with a provenance
    header to ``--output`` or stdout.
    """
    def __init__(
            self,
            parser_config: dict,
            global_arguments: Mapping[str, dict]):
        self.handler_map = {}
        self.subparser_map = {}
        self.global_arguments = global_arguments

        self.parser = argparse.ArgumentParser(**parser_config)
        self.subparsers = self.parser.add_subparsers(
                help='Available commands',
                dest='command',
                metavar='<command>')
        self.subparsers.required = True

    def register_handler(
            self,
            name: str,
            handler: CommandHandler,
            **kwargs):
        parser = self.subparsers.add_parser(
            name,
            add_help=True,
            help=kwargs.get('help'),
            description=kwargs.get('help'),
            conflict_handler='resolve')
        arguments.add_parser_arguments(parser, self.global_arguments)
        arg_desc_set = kwargs.get('arguments')
        if arg_desc_set:
            arguments.add_parser_arguments(parser, arg_desc_set)

        self.subparser_map[name] = parser
        self.handler_map[name] = handler

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            command_args = self.parser.parse_args(argv)
        except SystemExit as exc:
            # argparse exits with 2 on usage errors and 0 after --help
            return exc.code if isinstance(exc.code, int) else EXIT_CONFIG

        configure_logging(getattr(command_args, 'verbose', 0), getattr(command_args, 'quiet', False))
        started = time.perf_counter()
        try:
            report = self.handler_map[command_args.command].handle(command_args)
            if report is None:
                return EXIT_OK
            self.emit(report, command_args)
        except NewtonEnsembleError as exc:
            self.print_error(exc)
            return exc.exit_status
        except Exception as exc:
            log.debug('unexpected failure', exc_info=True)
            print('command error:', exc, file=sys.stderr)
            return EXIT_FAILED
        log.info('%s finished in %.2fs', command_args.command, time.perf_counter() - started)
        return report.exit_status

    def emit(self, report: Report, command_args: argparse.Namespace):
        header = output.provenance(
            report.command,
            config_echo(command_args),
            command_args.seed,
            command_args.deterministic)
        output.write_report(report, header, command_args.format, command_args.output)
        # terminals only
        if report.summary and not command_args.quiet and sys.stderr.isatty():
            print_formatted_text(FormattedText(report.summary), file=sys.stderr)

    @staticmethod
    def print_error(exc: NewtonEnsembleError):
        print('command error:', exc, file=sys.stderr)
        for key, value in sorted(exc.diagnostics.items()):
            print('    %s: %s' % (key, value), file=sys.stderr)
