#!/usr/bin/env python3
"""Height-shadow box dimensions of a ball family over a direction net.

Example:
    python scripts/run_rho_dimension.py --kind t-axis --delta 0.03125 --s 2.0
"""

import sys

from heislab.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:] or ["--kind", "t-axis", "--delta", "0.03125",
                            "--directions", "8"]
    sys.exit(main(["experiment", "rho-dim"] + argv))
