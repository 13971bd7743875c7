"""Largest W(L) over all maximal admissible sets of a fixed plane suite.

Writes the value used as a regression baseline by the acceptance tests:

    python3 scripts/diagnostic_baseline.py [--out tests/data/diagnostic_baseline.json]
"""

import argparse
import json
from pathlib import Path

import numpy as np

from sinrsched import InstanceParams
from sinrsched.generators import plane_suite
from sinrsched.oracle import admissible_masks
from sinrsched.weights import WeightGraph

SUITE = dict(count=50, seed=20240601, max_links=10, params=InstanceParams(alpha=3.0, beta=1.0))


def maximal_masks(ok: np.ndarray, n: int) -> list[int]:
    return [m for m in range(1, 1 << n) if ok[m] and all(m >> b & 1 or not ok[m | 1 << b] for b in range(n))]


def diagnostic(instance) -> tuple[float, int]:
    n = len(instance)
    ok = admissible_masks(instance, list(range(n)))
    graph = WeightGraph(instance)
    masks = maximal_masks(ok, n)
    worst = max(graph.max_weight([b for b in range(n) if m >> b & 1]) for m in masks)
    return worst, len(masks)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests/data/diagnostic_baseline.json"))
    args = ap.parse_args()
    per_instance = []
    for inst in plane_suite(**SUITE):
        w, count = diagnostic(inst)
        per_instance.append({"n": len(inst), "maximal_sets": count, "max_W": w})
    doc = {
        "suite": {k: v for k, v in SUITE.items() if k != "params"} | {"alpha": 3.0, "beta": 1.0},
        "max_W": max(r["max_W"] for r in per_instance),
        "instances": per_instance,
    }
    Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
    print(f"max W over maximal admissible sets: {doc['max_W']:.6f} ({len(per_instance)} instances) -> {args.out}")


if __name__ == "__main__":
    main()
