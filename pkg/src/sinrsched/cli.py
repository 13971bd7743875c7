"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import formats, generators
from .capacity import FeasibilityViolation, maximize_capacity
from .model import Instance, InputError, InstanceParams
from .routing import solve_clm
from .scheduling import schedule_multi_hop, schedule_single_hop, slot_bound
from .weights import WeightGraph, tau

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


# ---------------------------------------------------------------- generation

def generate(kind: str, n: int, seed: int, alpha=3.0, beta=1.0, noise=0.0, side=100.0,
             min_length=1.0, max_length=10.0, paths=0, hops=3, commodities=0) -> dict:
    """Random instance document; identical arguments give identical documents."""
    if n < 1:
        raise InputError("n must be >= 1")
    rng = np.random.default_rng(seed)
    instance = generators.random_instance(kind, n, rng, InstanceParams(alpha, beta, noise),
                                          side, min_length, max_length)
    walks = generators.random_paths(instance.metric, paths, hops, rng) if paths else None
    edges = comms = None
    if commodities:
        edges = generators.knn_edges(instance.metric)
        comms = generators.random_commodities(edges, commodities, rng, instance.metric.size)
    return formats.instance_to_doc(instance, walks, edges, comms)


# ---------------------------------------------------------------- reports

def _base_report(name: str, args, instance: Instance, threshold: float) -> dict:
    echo = {"name": name, "instance": args.instance}
    for key in ("k", "tau_override"):
        if hasattr(args, key):
            echo[key] = getattr(args, key)
    p = instance.params
    return {
        "command": echo,
        "seed": getattr(args, "seed", None),
        "params": {"alpha": p.alpha, "beta": p.beta, "noise": p.noise},
        "tau": threshold,
    }


def _link_rows(instance: Instance, ids, powers) -> list[dict]:
    pairs = [(instance.requests[i].sender, instance.requests[i].receiver) for i in ids]
    return formats.group_entries(instance, ids, pairs, powers)


def _hop_rows(sched, slot, powers) -> list[dict]:
    inst = sched.hop_links
    pairs = [(inst.requests[h].sender, inst.requests[h].receiver) for h in slot]
    rows = formats.group_entries(inst, slot, pairs, powers)
    for row, h in zip(rows, slot):
        row["hop"] = list(sched.hops[h])
    return rows


def run_capacity(args, loaded: formats.InstanceFile) -> dict:
    inst = loaded.instance
    threshold = args.tau_override or tau(inst.params)
    result = maximize_capacity(inst, args.k, threshold)
    report = _base_report("capacity", args, inst, threshold)
    report["channels"] = [{"links": _link_rows(inst, ch, pw)} for ch, pw in zip(result.channels, result.powers)]
    report["discarded"] = result.discarded
    report["statistics"] = {
        "W_R": WeightGraph(inst).max_weight(range(len(inst))) if len(inst) else 0.0,
        "tau": threshold,
        "k": args.k,
        "accepted": len(result),
        "discarded": len(result.discarded),
    }
    return report


def run_schedule(args, loaded: formats.InstanceFile) -> dict:
    inst = loaded.instance
    threshold = args.tau_override or tau(inst.params)
    sched = schedule_single_hop(inst, threshold)
    w_r = WeightGraph(inst).max_weight(range(len(inst))) if len(inst) else 0.0
    report = _base_report("schedule", args, inst, threshold)
    report["slots"] = [{"links": _link_rows(inst, s, pw)} for s, pw in zip(sched.slots, sched.powers)]
    report["statistics"] = {"W_R": w_r, "tau": threshold, "T": sched.length,
                            "slot_bound": slot_bound(w_r, threshold, len(inst))}
    return report


def _multihop_section(sched) -> tuple[list[dict], dict]:
    slots = [{"links": _hop_rows(sched, s, pw)} for s, pw in zip(sched.slots, sched.powers)]
    n = len(sched.hops)
    stats = {
        "W_R": WeightGraph(sched.hop_links).max_weight(range(n)) if n else 0.0,
        "T": sched.length,
        "K": sched.delay_bound,
        "delays": sched.delays,
        "super_slot_lengths": sched.super_slots,
    }
    return slots, stats


def run_multihop(args, loaded: formats.InstanceFile) -> dict:
    if loaded.paths is None:
        raise InputError("instance file has no paths")
    inst = loaded.instance
    threshold = args.tau_override or tau(inst.params)
    sched = schedule_multi_hop(inst, loaded.paths, args.seed, threshold)
    report = _base_report("multihop", args, inst, threshold)
    report["paths"] = [list(p) for p in loaded.paths.paths]
    report["slots"], stats = _multihop_section(sched)
    stats["D"] = max((len(p) - 1 for p in loaded.paths.paths), default=0)
    stats["tau"] = threshold
    report["statistics"] = stats
    return report


def run_route(args, loaded: formats.InstanceFile) -> dict:
    if loaded.routing is None:
        raise InputError("instance file has no edges/commodities")
    inst = loaded.instance
    threshold = args.tau_override or tau(inst.params)
    res = solve_clm(inst, loaded.routing, args.seed, threshold)
    report = _base_report("route", args, inst, threshold)
    report["paths"] = [list(p.nodes) for p in res.paths]
    report["slots"], stats = _multihop_section(res.schedule)
    stats.update({"z_star": res.z_star, "D": res.dilation, "tau": threshold,
                  "W_over_z": stats["W_R"] / res.z_star if res.z_star > 0 else 0.0})
    report["statistics"] = stats
    return report


def _text(report: dict) -> str:
    lines = [f"command: {report['command']['name']}"]
    for key, value in report.get("statistics", {}).items():
        lines.append(f"{key}: {value}")
    key = "channels" if "channels" in report else "slots"
    for t, group in enumerate(report.get(key, [])):
        ids = " ".join(str(r["id"]) if "hop" not in r else f"{r['hop'][0]}.{r['hop'][1]}" for r in group["links"])
        lines.append(f"{key[:-1]} {t}: {ids}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sinrsched", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a random instance")
    gen.add_argument("kind", choices=["line", "uniform-square", "clustered"])
    gen.add_argument("n", type=_positive_int, help="number of links")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--side", type=float, default=100.0)
    gen.add_argument("--min-length", type=float, default=1.0)
    gen.add_argument("--max-length", type=float, default=10.0)
    gen.add_argument("--paths", type=int, default=0, help="also generate this many multi-hop paths")
    gen.add_argument("--hops", type=_positive_int, default=3, help="maximum hops per generated path")
    gen.add_argument("--commodities", type=int, default=0, help="also generate an edge set and commodities")
    gen.add_argument("-o", "--output")

    def solver(name, help_text, seed_required=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("instance")
        p.add_argument("--seed", type=int, default=0 if seed_required else None)
        p.add_argument("--tau-override", type=float, default=None, help="testing only")
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--check", action=argparse.BooleanOptionalAction, default=True,
                       help="re-verify the report before writing it (default on)")
        p.add_argument("--timings", action="store_true", help="add wall-clock runtimes (not reproducible)")
        p.add_argument("-o", "--output")
        return p

    solver("capacity", "greedy k-channel capacity maximization").add_argument("--k", type=_positive_int, default=1)
    solver("schedule", "single-hop schedule of all links")
    solver("multihop", "schedule the instance's paths with random delays", seed_required=True)
    solver("route", "choose paths for the commodities and schedule them", seed_required=True)

    ver = sub.add_parser("verify", help="re-check a report against its instance")
    ver.add_argument("instance")
    ver.add_argument("report")

    for p in (gen, *(sub.choices[c] for c in ("capacity", "schedule", "multihop", "route"))):
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--noise", type=float)
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        formats.write_atomic(output, text)
    else:
        sys.stdout.write(text)


RUNNERS = {"capacity": run_capacity, "schedule": run_schedule, "multihop": run_multihop, "route": run_route}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            doc = generate(args.kind, args.n, args.seed,
                           alpha=3.0 if args.alpha is None else args.alpha,
                           beta=1.0 if args.beta is None else args.beta,
                           noise=0.0 if args.noise is None else args.noise,
                           side=args.side, min_length=args.min_length, max_length=args.max_length,
                           paths=args.paths, hops=args.hops, commodities=args.commodities)
            _emit(formats.dumps(doc), args.output)
            return EXIT_OK

        if args.command == "verify":
            loaded = formats.parse_instance(formats.read_json(args.instance))
            verdict = formats.verify_report(loaded.instance, formats.read_json(args.report),
                                            loaded.paths, loaded.routing)
            for problem in verdict.problems:
                print(problem)
            print("OK" if verdict.ok else "FAILED")
            return EXIT_OK if verdict.ok else EXIT_VERIFY

        overrides = {"alpha": args.alpha, "beta": args.beta, "noise": args.noise}
        loaded = formats.parse_instance(formats.read_json(args.instance), overrides)
        if args.tau_override is not None and not 0 < args.tau_override < 1:
            raise InputError("--tau-override must lie in (0, 1)")
        start = time.perf_counter()
        try:
            report = RUNNERS[args.command](args, loaded)
        except FeasibilityViolation as exc:
            print(f"internal error: {exc}", file=sys.stderr)
            return EXIT_VERIFY
        if args.timings:
            report["statistics"]["runtime_seconds"] = time.perf_counter() - start
        if args.check:
            verdict = formats.verify_report(loaded.instance, report, loaded.paths, loaded.routing)
            if not verdict.ok:
                for problem in verdict.problems:
                    print(problem, file=sys.stderr)
                return EXIT_VERIFY
        _emit(formats.dumps(report) if args.format == "json" else _text(report), args.output)
        return EXIT_OK
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
