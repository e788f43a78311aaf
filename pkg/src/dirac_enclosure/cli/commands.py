# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
#
# Copyright 2026 The dirac-enclosure Developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""
The four subcommands.

Each one reads its settings from :mod:`dirac_enclosure.config`, writes its result to
:attr:`~dirac_enclosure.config.execution.output_path` (or standard output) and returns the
process exit status. Library exceptions propagate to :func:`dirac_enclosure.cli.run.main`.
Reports are rendered as *ToML*.
"""

import sys
from dataclasses import replace

from dirac_enclosure import config

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_USAGE = 2
EXIT_NOT_CERTIFIED = 3

REASON_UNCONVERGED = 'norm quadrature did not converge: no certification'


def _emit(text):
    """Write ``text`` to the output file, or to standard output."""
    output = config.execution.output_path
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    output.write_text(text)
    config.loggers.cli.info(f'Result written to <{output}>.')


def _render(document):
    from toml import dumps

    return dumps(document)


def resolve_norms(need_norm32=True):
    """Norms of the configured potential, declared values first.

    Returns
    -------
    norm3, norm32 : float or None
    provenance : dict
        ``'declared'`` or ``'quadrature'`` per norm.
    converged : bool
        Whether every quadrature norm reached the requested tolerance.
    label : str or None
        Label of the potential, if one was given.
    """
    from dirac_enclosure.utils.potential import from_spec, lp_norm

    spectral = config.spectral
    potential = from_spec(spectral.potential) if spectral.potential else None
    norms = {'norm3': spectral.norm3, 'norm32': spectral.norm32}
    provenance = {}
    converged = True
    for name, p in (('norm3', 3), ('norm32', 1.5)):
        if norms[name] is not None:
            norms[name] = float(norms[name])
            provenance[name] = 'declared'
            continue
        if potential is None or (name == 'norm32' and not need_norm32):
            continue
        if potential.kind == 'declared' and name == 'norm32' and potential.declared_norm32 is None:
            continue
        result = lp_norm(potential, p, spectral.tolerance)
        norms[name] = result.value
        provenance[name] = result.provenance
        converged = converged and result.converged

    label = None if potential is None else potential.label
    return norms['norm3'], norms['norm32'], provenance, converged, label


def cmd_certify():
    """Certify (or not) a single spectral point."""
    from dirac_enclosure.utils.enclosure import certify

    spectral = config.spectral
    norm3, norm32, provenance, converged, label = resolve_norms()
    report = certify(spectral.spectral_point, spectral.mass, norm3, norm32, provenance)
    if not converged and report.certified:
        config.loggers.cli.warning('Norm quadrature did not converge; refusing to certify.')
        report = replace(
            report,
            thm1_certified=False,
            thm2_certified=False,
            certified=False,
            reasons=report.reasons + (REASON_UNCONVERGED,),
        )

    document = {'certify': report.as_dict() | {'potential': label}}
    document['certify']['provenance'] = dict(report.provenance)
    _emit(_render(document))

    config.loggers.cli.log(
        25,
        f'lambda = {report.lam}: ' + ('certified.' if report.certified else 'not certified.'),
    )
    return EXIT_OK if report.certified else EXIT_NOT_CERTIFIED


def cmd_raster():
    """Rasterize the criteria over a lattice and write a grid file."""
    from dirac_enclosure.utils.enclosure import raster
    from dirac_enclosure.utils.gridio import write_grid

    spectral = config.spectral
    norm3, norm32, _, converged, label = resolve_norms()
    if not converged:
        config.loggers.cli.warning(
            'Norm quadrature did not converge; the grid file records the estimates as they are.'
        )
    region = raster(spectral.grid, spectral.mass, norm3, norm32)
    output = config.execution.output_path
    write_grid(region, sys.stdout if output is None else output, potential=label)
    config.loggers.cli.log(
        25,
        f'{int(region.cells["certified"].sum())} of {len(region)} points certified.',
    )
    return EXIT_OK


def cmd_bsnorm():
    """Estimate the Birman-Schwinger norm and compare it with the analytic bounds."""
    from dirac_enclosure.utils.birman_schwinger import (
        bs_norm_estimate,
        build_bs,
        lemma1_bound,
        lemma2_bound,
        scheme_from_config,
    )
    from dirac_enclosure.utils.dirac import dirac_basis
    from dirac_enclosure.utils.potential import from_spec
    from dirac_enclosure.utils.resolvent import SpectralPoint

    spectral = config.spectral
    seed = config.seeds.numpy
    point = SpectralPoint(spectral.spectral_point, spectral.mass)
    potential = from_spec(spectral.potential)
    scheme = scheme_from_config(spectral.scheme, spectral.nodes, seed, spectral.half_width)

    disc = build_bs(point, potential, scheme, basis=dirac_basis(spectral.representation))
    estimate = bs_norm_estimate(disc, spectral.iterations, seed)
    norm3, norm32, provenance, converged, _ = resolve_norms()

    bound1 = lemma1_bound(point, norm3)
    bound2 = None if norm32 is None else lemma2_bound(point, norm3, norm32)
    document = {
        'bsnorm': {
            'lambda_re': point.z.real,
            'lambda_im': point.z.imag,
            'm': point.m,
            'potential': potential.label,
            'scheme': disc.scheme,
            'estimate': estimate.value,
            'node_count': estimate.node_count,
            'seed': estimate.seed,
            'estimator_iterations': estimate.estimator_iterations,
            'estimator_converged': estimate.converged,
            'norm3': norm3,
            'norm32': norm32,
            'norms_converged': converged,
            'lemma1_bound': bound1,
            'below_lemma1_bound': estimate.value <= bound1,
            'lemma2_bound': bound2,
            'below_lemma2_bound': None if bound2 is None else estimate.value <= bound2,
            'provenance': provenance,
        }
    }
    _emit(_render(document))

    for name, bound in (('first', bound1), ('mass-independent', bound2)):
        if bound is not None and estimate.value > bound:
            config.loggers.cli.warning(
                f'The estimate {estimate.value:.6g} exceeds the {name} analytic bound '
                f'{bound:.6g}.'
            )
    return EXIT_OK


def cmd_check():
    """Run the self-validation suites."""
    from dirac_enclosure.utils.checks import run_checks

    results = run_checks(seed=config.seeds.numpy)
    document = {
        'check': {
            'seed': config.seeds.numpy,
            'passed': all(result.passed for result in results),
            'suites': {
                result.name: {
                    'checked': result.checked,
                    'failed': result.failed,
                    'passed': result.passed,
                    'notes': list(result.notes),
                }
                for result in results
            },
        }
    }
    _emit(_render(document))
    return EXIT_OK if document['check']['passed'] else EXIT_FAILED_CHECKS


COMMANDS = {
    'certify': cmd_certify,
    'raster': cmd_raster,
    'bsnorm': cmd_bsnorm,
    'check': cmd_check,
}
