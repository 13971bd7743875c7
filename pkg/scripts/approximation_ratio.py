"""Greedy capacity against the exhaustive optimum on small random plane instances.

    python3 scripts/approximation_ratio.py [--instances 100] [--max-links 8] [--seed 0]
"""

import argparse
import itertools

import numpy as np

from sinrsched import InstanceParams
from sinrsched.capacity import maximize_capacity
from sinrsched.generators import plane_suite
from sinrsched.oracle import brute_force_capacity
from sinrsched.weights import WeightGraph, tau


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--max-links", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'alpha':>5} {'beta':>5} {'k':>2} {'mean ALG/OPT':>13} {'min ALG/OPT':>12} {'min ALG/bound':>14}")
    for alpha, beta, k in itertools.product((2.5, 3.0, 4.0), (0.5, 1.0, 2.0), (1, 2)):
        suite = plane_suite(args.instances, args.seed, args.max_links, InstanceParams(alpha, beta))
        ratios, slack = [], []
        for inst in suite:
            alg = len(maximize_capacity(inst, k))
            opt = brute_force_capacity(inst, k)
            union = [l for ch in opt.witness for l in ch]
            t = tau(inst.params)
            bound = k * t / (WeightGraph(inst).max_weight(union) + k * t) * len(union)
            ratios.append(alg / opt.optimum)
            slack.append(alg / bound)
        print(f"{alpha:5.1f} {beta:5.1f} {k:2d} {np.mean(ratios):13.3f} {min(ratios):12.3f} {min(slack):14.3f}")


if __name__ == "__main__":
    main()
