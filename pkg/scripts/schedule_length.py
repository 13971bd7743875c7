"""Single-hop schedule length against the slot bound and, for small n, the exhaustive optimum.

    python3 scripts/schedule_length.py [--sizes 10 20 40 80] [--repeats 20] [--seed 0]
"""

import argparse

import numpy as np

from sinrsched import InstanceParams
from sinrsched.generators import plane_suite, random_instance
from sinrsched.oracle import brute_force_schedule
from sinrsched.scheduling import schedule_single_hop, slot_bound
from sinrsched.weights import WeightGraph, tau


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 80])
    ap.add_argument("--repeats", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    params = InstanceParams(3.0, 1.0)

    print(f"{'n':>4} {'mean T':>8} {'mean W':>8} {'mean T/(W ln n)':>16} {'max T/bound':>12}")
    for n in args.sizes:
        rng = np.random.default_rng([args.seed, n])
        rows = []
        for _ in range(args.repeats):
            inst = random_instance("uniform-square", n, rng, params, side=10.0 * np.sqrt(n))
            t = schedule_single_hop(inst).length
            w = WeightGraph(inst).max_weight(range(n))
            rows.append((t, w, t / max(w * np.log(n), 1e-12), t / slot_bound(w, tau(params), n)))
        t, w, norm, tight = np.array(rows).T
        print(f"{n:4d} {t.mean():8.2f} {w.mean():8.3f} {norm.mean():16.3f} {tight.max():12.4f}")

    gaps = []
    for inst in plane_suite(args.repeats * 2, args.seed, 8, params):
        gaps.append(schedule_single_hop(inst).length / brute_force_schedule(inst).optimum)
    print(f"small instances (n <= 8): mean T/T_opt {np.mean(gaps):.3f}, max {np.max(gaps):.3f}")


if __name__ == "__main__":
    main()
