import argparse
from typing import List, Mapping, Optional, Tuple

__all__ = [
    'ArgDescriptor',
    'add_parser_arguments',
    'float_list',
    'int_list',
    'int_range',
]


class ArgDescriptor(dict):
    """
    Keyword dictionary for ``argparse.ArgumentParser.add_argument()``, keyed by a
    unique argument name.

    Besides the usual keywords it understands ``flags`` with the option strings of
    non-positional arguments. When ``flags`` is given, ``dest`` defaults to the
    name; otherwise the name itself is the positional argument. Valued arguments
    get ``<dest>`` as metavar unless one is given.

    :param name: argument key, also the Namespace field of option arguments
    :param flags: option strings, e.g. ``['-N', '--degree']``
    """
    def __init__(self, name: str, flags: Optional[List[str]] = None, **kwargs):
        super().__init__(**kwargs)
        self.name = name
        self.flags = list(flags) if flags else [name]
        if flags and 'dest' not in kwargs:
            self['dest'] = name
        if not self.is_switch() and 'metavar' not in kwargs:
            self['metavar'] = '<%s>' % (self.get('dest') or name)

    @property
    def action(self) -> Optional[str]:
        return self.get('action')

    @property
    def dest(self) -> Optional[str]:
        return self.get('dest')

    @property
    def metavar(self) -> Optional[str]:
        return self.get('metavar')

    def is_positional(self) -> bool:
        return not self.flags[0].startswith('-')

    def is_switch(self) -> bool:
        """
        :return: whether the argument takes no value (``store_true``, ``store_false``, ``count``)
        """
        return self.action in ('store_true', 'store_false', 'count')


def add_parser_arguments(
        parser: argparse.ArgumentParser,
        arg_description_set: Mapping[str, dict]) -> None:
    """
    Adds one argument per entry of an ARG_SPEC dictionary, using the ``flags`` of
    its .ArgDescriptor as ``name_or_flags`` and the descriptor as keywords.
    """
    for arg_key, argparse_desc in arg_description_set.items():
        arg_description = ArgDescriptor(arg_key, **argparse_desc)
        parser.add_argument(*arg_description.flags, **arg_description)


# ============
# Value types
# ============

def float_list(text: str) -> Tuple[float, ...]:
    """Comma separated floats, as in ``--s 0,1.386``."""
    try:
        return tuple(float(part) for part in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated numbers, got %r' % text)


def int_list(text: str) -> Tuple[int, ...]:
    """Comma separated integers, as in ``--Ns 10,20,40``."""
    try:
        return tuple(int(part) for part in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated integers, got %r' % text)


def int_range(text: str) -> Tuple[int, ...]:
    """
    Integer list or ``start:stop:step`` range with inclusive stop, as in ``50:400:50``.
    """
    if ':' not in text:
        return int_list(text)
    parts = text.split(':')
    if len(parts) == 2:
        parts.append('1')
    try:
        start, stop, step = (int(part) for part in parts)
    except ValueError:
        raise argparse.ArgumentTypeError('expected start:stop[:step], got %r' % text)
    if step < 1 or stop < start:
        raise argparse.ArgumentTypeError('empty range %r' % text)
    return tuple(range(start, stop + 1, step))
