#!/usr/bin/env python3
"""Chart the displacement domain where entanglement survives copropagation.

For two-mode squeezed vacua behind a shared fading channel, coherent
displacement (d_a, d_b) decides whether the 2x2 certifier keeps its sign
for every transmittance law.  Draws the domain as an ASCII map per
squeeze parameter and reports its area fraction on the grid.
"""

import argparse
import sys

import numpy as np

from turbulight.entangle import preservation_domain
from turbulight.states import tmsv


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--xi", type=float, nargs="+",
                        default=[0.2, 0.5, 1.0],
                        help="squeeze parameters to chart")
    parser.add_argument("--extent", type=float, default=2.0,
                        help="half-width of the displacement grid")
    parser.add_argument("--cells", type=int, default=33,
                        help="grid cells per axis (odd keeps 0 on-grid)")
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    grid = np.linspace(-args.extent, args.extent, args.cells)
    for xi in args.xi:
        state = tmsv(xi)
        inside = np.zeros((args.cells, args.cells), dtype=bool)
        for i, da in enumerate(grid):
            for j, db in enumerate(grid):
                inside[i, j] = preservation_domain(state, float(da), float(db))
        fraction = inside.mean()
        print(f"# xi = {xi}: domain fraction {fraction:.3f} "
              f"on [-{args.extent}, {args.extent}]^2")
        for i in range(args.cells - 1, -1, -1):  # d_b upward
            print("".join("#" if inside[j, i] else "." for j in range(args.cells)))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
