"""Exceptions raised by the *dirac-enclosure* library.

Library code raises these and never exits the interpreter; the command line
maps them onto exit status 2 (see :mod:`dirac_enclosure.cli.run`).
"""


class DiracEnclosureError(Exception):
    """Base class for all errors of this package."""


class ConfigurationError(DiracEnclosureError, ValueError):
    """An input setting is malformed or out of its admissible range."""


class DomainError(DiracEnclosureError, ValueError):
    """A quantity was requested outside of its domain of definition."""


class UnsupportedPotentialError(DiracEnclosureError, ValueError):
    """The requested computation is not available for this potential or spectral point."""
