#!/usr/bin/env python3
"""Re-derive the empirical constants manifest.

Writes to stdout by default; pass --out to write a manifest file (the
checked-in regression baseline lives at tests/fixtures/constants_manifest.txt
and was produced with --seed 0).
"""

import sys

from heislab.cli import main

if __name__ == "__main__":
    sys.exit(main(["constants"] + sys.argv[1:]))
