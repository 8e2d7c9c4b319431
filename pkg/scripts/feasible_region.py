"""Render the feasible (rho, alpha) region of the 5x5 example covariance.

    python3 scripts/feasible_region.py --steps 40
    python3 scripts/feasible_region.py --format svg --out region.svg
"""
import argparse

import numpy as np

from crosscov import alpha_bounds, validate
from crosscov.region import region_grid, render_ascii, render_svg

EXAMPLE = np.array(
    [
        [7, 0, 0, 1, 0.5],
        [0, 7, 0, 2, 1],
        [0, 0, 7, 3, 1.5],
        [1, 2, 3, 9, 0],
        [0.5, 1, 1.5, 0, 5],
    ]
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=40)
    ap.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    ap.add_argument("--out")
    args = ap.parse_args()

    cov = validate(EXAMPLE, 3, 2, strict_rank=True)
    bounds = alpha_bounds(cov)
    grid = region_grid(bounds, args.steps)
    text = render_ascii(grid, bounds) if args.format == "ascii" else render_svg(grid, bounds)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out} ({int(grid.mask.sum())} feasible cells)")
    else:
        print(text, end="")
    print(f"closed forms: alpha_min={np.sqrt(2030) / 30:.9f} alpha_max={np.sqrt(7):.9f} rho_min={np.sqrt(290) / 30:.9f}")


if __name__ == "__main__":
    main()
