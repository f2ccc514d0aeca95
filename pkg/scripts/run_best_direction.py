#!/usr/bin/env python3
"""Scan projected areas over a direction net for a generated ball family.

Example:
    python scripts/run_best_direction.py --kind heis-lattice --delta 0.0625
"""

import sys

from heislab.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:] or ["--kind", "heis-lattice", "--delta", "0.0625",
                            "--directions", "16"]
    sys.exit(main(["experiment", "best-direction"] + argv))
