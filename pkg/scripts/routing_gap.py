"""Latency of the LP-rounding router on grid networks, against the LP value z*.

    python3 scripts/routing_gap.py [--width 4] [--height 4] [--commodities 6] [--runs 5]
"""

import argparse

import numpy as np

from sinrsched import Instance, InstanceParams
from sinrsched.generators import grid
from sinrsched.routing import RoutingProblem, solve_clm


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--width", type=int, default=4)
    ap.add_argument("--height", type=int, default=4)
    ap.add_argument("--commodities", type=int, default=6)
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    metric, edges = grid(args.width, args.height)
    base = Instance.build(metric, InstanceParams(), [])
    rng = np.random.default_rng(args.seed)
    size = metric.size
    comms = [tuple(int(v) for v in rng.choice(size, 2, replace=False)) for _ in range(args.commodities)]
    problem = RoutingProblem(tuple(edges), tuple(comms))
    print(f"{'seed':>4} {'z*':>8} {'D':>3} {'T':>4} {'T/z*':>6}")
    for seed in range(args.runs):
        res = solve_clm(base, problem, seed)
        print(f"{seed:4d} {res.z_star:8.3f} {res.dilation:3d} {res.length:4d} {res.length / res.z_star:6.2f}")


if __name__ == "__main__":
    main()
