"""Command-line interface of *dirac-enclosure*."""
