"""Numerical building blocks: Dirac algebra, resolvent kernel, enclosures, potentials."""
