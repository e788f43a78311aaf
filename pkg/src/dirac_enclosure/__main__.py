# SPDX-License-Identifier: Apache-2.0
import sys

if __name__ == '__main__':
    from .cli.run import main

    sys.exit(main())
