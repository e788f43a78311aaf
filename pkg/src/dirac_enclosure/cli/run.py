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
"""Certified eigenvalue-free regions from the command line.

Exit status: 0 when the point is certified (or all checks pass), 3 when it is not
certified, 1 when a self-validation suite fails and 2 on input or I/O errors.
"""

from dirac_enclosure import config

EXITCODE: int = -1


def main():
    """Entry point."""

    import sys

    from dirac_enclosure.cli.commands import COMMANDS, EXIT_USAGE
    from dirac_enclosure.cli.parser import parse_args
    from dirac_enclosure.exceptions import DiracEnclosureError

    parse_args()

    config.loggers.cli.log(
        15,
        '\n'.join(['dirac-enclosure config:'] + [f'\t\t{s}' for s in config.dumps().splitlines()]),
    )

    global EXITCODE
    command = config.execution.command
    try:
        EXITCODE = COMMANDS[command]()
    except DiracEnclosureError as e:
        config.loggers.cli.critical('dirac-enclosure %s failed: %s', command, e)
        EXITCODE = EXIT_USAGE
    except OSError as e:
        config.loggers.cli.critical('dirac-enclosure %s could not write: %s', command, e)
        EXITCODE = EXIT_USAGE
    else:
        settings_file = config.execution.settings_path()
        if settings_file is not None:
            config.to_filename(settings_file)
            config.loggers.cli.info(f'Settings saved to <{settings_file}>.')

    sys.exit(EXITCODE)


if __name__ == '__main__':
    raise RuntimeError(
        'dirac_enclosure/cli/run.py should not be run directly;\n'
        'Please `pip install` dirac-enclosure and use the `dirac-enclosure` command'
    )
