#!/usr/bin/env python
"""
Standalone script to evaluate the constants of ``dirac_enclosure.utils.constants``.

Every constant is evaluated with :mod:`mpmath` at the requested precision and printed as a
Python assignment, ready to be pasted into the module. With ``--verify``, the literals
currently embedded in the installed package are compared against the recomputed values.

Run it within the ``constants`` environment::

    hatch run constants:show --digits 50
"""

import argparse
import sys

import mpmath


def closed_forms():
    """Closed forms, as ``(name, thunk)`` pairs evaluated at the current precision."""
    e, pi = mpmath.e, mpmath.pi
    sqrt, cbrt = mpmath.sqrt, mpmath.cbrt
    return (
        ('C1', lambda: sqrt(1 + e**-1 + 2 * e**-2) / (2 * pi)),
        ('C2', lambda: sqrt(2) / (2 * pi)),
        ('C2_TILDE', lambda: sqrt(2 * e**-2) / (2 * pi)),
        ('C_THM1', lambda: cbrt(pi / 2) * sqrt(1 + e**-1 + 2 * e**-2)),
        ('C_THM2', lambda: mpmath.power(2, mpmath.mpf(17) / 6) / (3 * mpmath.cbrt(pi**2))),
        ('LEMMA_COEFF', lambda: cbrt(pi / 2) * sqrt(1 + e**-1 + e**-2)),
        ('HLS_CONSTANT', lambda: mpmath.cbrt(4) * mpmath.cbrt(pi**4)),
        ('RELATIVE_BOUND', lambda: cbrt(2 * pi**2)),
        ('GAUSS_L3', lambda: sqrt(pi / 3)),
        ('GAUSS_L32', lambda: 2 * pi / 3),
        ('KATO_CONSTANT', lambda: 2 / pi),
    )


def evaluate(digits):
    """Return ``{name: mpf}`` with ``digits`` significant digits."""
    with mpmath.workdps(digits + 10):
        return {name: +thunk() for name, thunk in closed_forms()}


def verify(values, rtol=1e-15):
    """Compare the embedded literals against ``values``; return the names that differ."""
    from dirac_enclosure.utils import constants

    mismatches = []
    for name, value in values.items():
        literal = getattr(constants, name)
        if abs(literal - float(value)) > rtol * abs(float(value)):
            mismatches.append(name)
            print(f'{name}: embedded {literal!r}, recomputed {float(value)!r}', file=sys.stderr)
    return mismatches


if __name__ == '__main__':
    parser = argparse.ArgumentParser(
        description='Evaluate the constants of dirac-enclosure at high precision',
    )
    parser.add_argument(
        '--digits',
        type=int,
        default=50,
        help='Number of significant digits to print.',
    )
    parser.add_argument(
        '--verify',
        action='store_true',
        help='Compare against the literals embedded in the installed package.',
    )
    opts = parser.parse_args()

    values = evaluate(opts.digits)
    for name, value in values.items():
        print(f'{name} = {mpmath.nstr(value, opts.digits, strip_zeros=False)}')

    if opts.verify:
        sys.exit(1 if verify(values) else 0)
