#!/usr/bin/env python3
"""L^2 energy of the dual plate family of a (delta, 3, C) ball family.

Example:
    python scripts/run_plate_energy.py --kind random3 --delta 0.0625
"""

import sys

from heislab.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:] or ["--kind", "random3", "--delta", "0.125",
                            "--samples", "50000", "--seed", "1"]
    sys.exit(main(["experiment", "plate-energy"] + argv))
