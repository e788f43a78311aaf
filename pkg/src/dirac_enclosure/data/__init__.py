"""dirac-enclosure data files

.. autofunction:: load

Files are resolved through :mod:`importlib.resources`; for zipped installations they are
extracted once into a temporary directory that lives until the interpreter exits.
"""

import atexit
from contextlib import ExitStack
from functools import cache
from importlib.resources import as_file, files
from pathlib import Path

__all__ = ['load']

_stack = ExitStack()
atexit.register(_stack.close)


@cache
def load(*segments) -> Path:
    """Return a filesystem path to a data file of this package.

    >>> load('tests', 'config.toml').name
    'config.toml'

    """
    resource = files(__package__)
    for segment in segments:
        resource = resource / segment
    return _stack.enter_context(as_file(resource))
