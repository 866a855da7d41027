"""
Exception hierarchy shared by the library and the command line.

Every error carries a ``diagnostics`` dictionary with the numbers that led to
it, so the command line can print something more useful than a message.
"""

__all__ = [
    'NewtonEnsembleError',
    'ConfigError',
    'PolytopeFileError',
    'GridSpecError',
    'NumericError',
    'NotFullDimensional',
    'NegativeCoordinate',
    'DimensionUnsupported',
    'LatticeOverflow',
    'OutsidePolytope',
    'NonDelzant',
    'BoundaryPoint',
    'OutOfSimplex',
    'NoFaceAccepted',
    'TransitionPoint',
    'RootFindingFailed',
    'ResultantIllConditioned',
    'DegenerateSystem',
    'EmptyRestriction',
    'ArtifactError',
    'EXIT_OK',
    'EXIT_FAILED',
    'EXIT_CONFIG',
    'EXIT_NUMERIC',
]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class NewtonEnsembleError(Exception):
    exit_status = EXIT_FAILED

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


# ============
# Input errors
# ============

class ConfigError(NewtonEnsembleError):
    exit_status = EXIT_CONFIG


class PolytopeFileError(ConfigError):
    pass


class GridSpecError(ConfigError):
    pass


class NotFullDimensional(ConfigError):
    pass


class NegativeCoordinate(ConfigError):
    pass


class DimensionUnsupported(ConfigError):
    pass


class NonDelzant(ConfigError):
    pass


class OutsidePolytope(ConfigError):
    pass


class OutOfSimplex(ConfigError):
    pass


class BoundaryPoint(ConfigError):
    pass


class ArtifactError(NewtonEnsembleError):
    """An emitted file that does not re-parse."""


# ==============
# Numeric errors
# ==============

class NumericError(NewtonEnsembleError):
    exit_status = EXIT_NUMERIC


class LatticeOverflow(NumericError):
    pass


class NoFaceAccepted(NumericError):
    pass


class TransitionPoint(NumericError):
    pass


class RootFindingFailed(NumericError):
    pass


class ResultantIllConditioned(NumericError):
    pass


class DegenerateSystem(NumericError):
    pass


class EmptyRestriction(NumericError):
    """A facet restriction with no free roots. Callers treat it as a zero count."""
