"""
Artifacts written by the command line.

Every file starts with a provenance header: tool, version, command, seed, the
echoed configuration and, unless ``--deterministic`` is given, a UTC timestamp.

CSV files carry the header as ``# key: <json>`` comment lines, followed by an
optional ``# data: <json>`` line with the structured part of the report, then a
regular CSV table:

    ..code::

        # tool: "newton-ensemble"
        # version: "0.1"
        # command: "regions"
        # seed: 0
        # config: {"grid": "-3:3:61x-3:3:61", ...}
        s1,s2,face,face_dim,allowed,transition,b,...

JSON files hold one object whose first key is ``provenance``.
"""
import csv
import datetime
import enum
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from newton_ensemble import __version__
from newton_ensemble.errors import EXIT_OK, ArtifactError

__all__ = [
    'TOOL_NAME',
    'PROVENANCE_KEYS',
    'Report',
    'ValidationResult',
    'plain',
    'provenance',
    'render',
    'write_report',
    'validate',
]

log = logging.getLogger(__name__)

TOOL_NAME = 'newton-ensemble'
PROVENANCE_KEYS = ('tool', 'version', 'command', 'seed', 'config')
_COMMENT = '# '


@dataclass
class Report:
    """
    Result of one subcommand.

    :param columns: header of the table part
    :param rows: table rows, one value per column
    :param data: structured part (JSON object)
    :param summary: prompt_toolkit formatted text fragments for the terminal
    """
    command: str
    columns: Tuple[str, ...] = ()
    rows: List[Sequence] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    exit_status: int = EXIT_OK
    summary: List[Tuple[str, str]] = field(default_factory=list)


@dataclass(frozen=True)
class ValidationResult:
    path: str
    output_format: str
    columns: Tuple[str, ...]
    rows: int


def plain(value):
    """Converts numpy, complex, Fraction and Enum values into JSON friendly ones."""
    if isinstance(value, dict):
        return {str(key.value if isinstance(key, enum.Enum) else key): plain(item)
                for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(item) for item in value]
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (complex, np.complexfloating)):
        return repr(complex(value))
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def _cell(value) -> str:
    value = plain(value)
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return str(value)


def provenance(command: str, config: dict, seed: int, deterministic: bool) -> dict:
    header = dict(tool=TOOL_NAME, version=__version__, command=command, seed=seed, config=plain(config))
    if not deterministic:
        header['timestamp'] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return header


def _render_csv(report: Report, header: dict) -> str:
    buffer = io.StringIO()
    for key, value in header.items():
        buffer.write('%s%s: %s\n' % (_COMMENT, key, json.dumps(plain(value))))
    if report.data:
        buffer.write('%sdata: %s\n' % (_COMMENT, json.dumps(plain(report.data))))
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def _render_json(report: Report, header: dict) -> str:
    document = dict(
        provenance=header,
        columns=list(report.columns),
        rows=[plain(list(row)) for row in report.rows],
        data=plain(report.data))
    return json.dumps(document, indent=2) + '\n'


def render(report: Report, header: dict, output_format: str) -> str:
    if output_format == 'json':
        return _render_json(report, header)
    return _render_csv(report, header)


def write_report(report: Report, header: dict, output_format: str, path: Optional[str] = None) -> str:
    text = render(report, header, output_format)
    if path:
        with open(path, 'w', newline='') as fh:
            fh.write(text)
        log.info('wrote %d rows to %s', len(report.rows), path)
    else:
        sys.stdout.write(text)
    return text


# ==========
# Validation
# ==========

def _check_provenance(path: str, header: dict):
    missing = [key for key in PROVENANCE_KEYS if key not in header]
    if missing:
        raise ArtifactError('%s: provenance header lacks %s' % (path, ', '.join(missing)), path=path)
    if header['tool'] != TOOL_NAME:
        raise ArtifactError('%s: not written by %s' % (path, TOOL_NAME), path=path, tool=header['tool'])


def _validate_json(path: str, text: str) -> ValidationResult:
    try:
        document = json.loads(text)
    except ValueError as exc:
        raise ArtifactError('%s: invalid JSON: %s' % (path, exc), path=path)
    if not isinstance(document, dict) or next(iter(document), None) != 'provenance':
        raise ArtifactError('%s: document does not start with provenance' % path, path=path)
    _check_provenance(path, document['provenance'])
    columns = tuple(document.get('columns', ()))
    rows = document.get('rows', [])
    for index, row in enumerate(rows):
        if len(row) != len(columns):
            raise ArtifactError('%s: row %d has %d values for %d columns' % (path, index, len(row), len(columns)),
                                path=path, row=index)
    return ValidationResult(path, 'json', columns, len(rows))


def _validate_csv(path: str, text: str) -> ValidationResult:
    lines = text.splitlines()
    header = {}
    position = 0
    while position < len(lines) and lines[position].startswith(_COMMENT):
        key, separator, value = lines[position][len(_COMMENT):].partition(': ')
        if not separator:
            raise ArtifactError('%s: malformed header line %d' % (path, position + 1), path=path)
        try:
            header[key] = json.loads(value)
        except ValueError as exc:
            raise ArtifactError('%s: header %r is not JSON: %s' % (path, key, exc), path=path)
        position += 1
    _check_provenance(path, header)
    table = list(csv.reader(lines[position:]))
    if not table:
        raise ArtifactError('%s: missing column header' % path, path=path)
    columns = tuple(table[0])
    for index, row in enumerate(table[1:]):
        if len(row) != len(columns):
            raise ArtifactError('%s: row %d has %d values for %d columns' % (path, index, len(row), len(columns)),
                                path=path, row=index)
    return ValidationResult(path, 'csv', columns, len(table) - 1)


def validate(path: str) -> ValidationResult:
    """
    Re-parses an emitted file.

    :raises ArtifactError: when the file cannot be read or does not parse
    """
    try:
        with open(path, 'r', newline='') as fh:
            text = fh.read()
    except OSError as exc:
        raise ArtifactError('cannot read %s: %s' % (path, exc), path=path)
    if text.lstrip().startswith('{'):
        return _validate_json(path, text)
    return _validate_csv(path, text)
