"""JSON instance and report files."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Any

from .model import Instance, InputError, InstanceParams, MetricSpace, check_feasible
from .routing import RoutingProblem
from .scheduling import MultiHopRequest


@dataclass
class InstanceFile:
    instance: Instance
    paths: MultiHopRequest | None = None
    routing: RoutingProblem | None = None


def parse_instance(doc: dict, overrides: dict | None = None) -> InstanceFile:
    if not isinstance(doc, dict):
        raise InputError("instance file must hold a JSON object")
    try:
        params = {k: float(doc.get(k, d)) for k, d in (("alpha", 3.0), ("beta", 1.0), ("noise", 0.0))}
        for k, v in (overrides or {}).items():
            if v is not None:
                params[k] = float(v)
        metric_doc = doc["metric"]
        kind = metric_doc["kind"]
        if kind == "euclidean":
            metric = MetricSpace.euclidean(metric_doc["points"])
        elif kind == "matrix":
            metric = MetricSpace.matrix(metric_doc["distances"])
        else:
            raise InputError(f"unknown metric kind {kind!r}")
        instance = Instance.build(metric, InstanceParams(**params), [tuple(l) for l in doc.get("links", [])])
        paths = None
        if doc.get("paths") is not None:
            for p in doc["paths"]:
                for v in p:
                    metric.check_node(v)
            paths = MultiHopRequest(tuple(tuple(p) for p in doc["paths"]))
        routing = None
        if doc.get("edges") is not None or doc.get("commodities") is not None:
            edges = [tuple(e) for e in doc.get("edges", [])]
            comms = [tuple(c) for c in doc.get("commodities", [])]
            for pair in edges + comms:
                if len(pair) != 2:
                    raise InputError(f"expected a node pair, got {list(pair)}")
                for v in pair:
                    metric.check_node(v)
            routing = RoutingProblem(tuple(edges), tuple(comms))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed instance file: {exc!r}") from None
    return InstanceFile(instance, paths, routing)


def instance_to_doc(instance: Instance, paths=None, edges=None, commodities=None) -> dict:
    metric = instance.metric
    if metric.kind == "euclidean":
        metric_doc = {"kind": "euclidean", "points": metric.points.tolist()}
    else:
        metric_doc = {"kind": "matrix", "distances": metric.distances.tolist()}
    doc: dict[str, Any] = {
        "alpha": instance.params.alpha,
        "beta": instance.params.beta,
        "noise": instance.params.noise,
        "metric": metric_doc,
        "links": [[l.sender, l.receiver] for l in instance.requests],
    }
    if paths is not None:
        doc["paths"] = [list(p) for p in paths]
    if edges is not None:
        doc["edges"] = [list(e) for e in edges]
        doc["commodities"] = [list(c) for c in commodities or []]
    return doc


def read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def dumps(doc: Any) -> str:
    # repr-based float formatting round-trips doubles exactly
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def group_entries(instance: Instance, ids, pairs, powers: dict[int, float]) -> list[dict]:
    """Report rows for one channel/slot; margins are recomputed from the rows' own node pairs."""
    ids = list(ids)
    sub = Instance.build(instance.metric, instance.params, pairs)
    p = {j: powers[i] for j, i in enumerate(ids)}
    rep = check_feasible(sub, range(len(ids)), p)
    return [
        {"id": i, "sender": s, "receiver": r, "power": p[j], "margin": rep.margins[j], "signal": rep.signals[j]}
        for j, (i, (s, r)) in enumerate(zip(ids, pairs))
    ]


@dataclass
class Verdict:
    ok: bool
    problems: list[str]


def verify_report(instance: Instance, report: dict, paths: MultiHopRequest | None = None,
                  routing: RoutingProblem | None = None, rtol: float = 1e-9) -> Verdict:
    """Re-derive every group's SINR margins from the instance metric and the reported powers."""
    problems: list[str] = []
    try:
        params = InstanceParams(**{k: float(report["params"][k]) for k in ("alpha", "beta", "noise")})
        command = report["command"]["name"]
        key = "channels" if command == "capacity" else "slots"
        groups = report[key]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed report: {exc!r}") from None
    inst = Instance(instance.metric, params, instance.requests)

    for g, group in enumerate(groups):
        rows = group["links"]
        if not rows:
            continue
        try:
            pairs = [(int(r["sender"]), int(r["receiver"])) for r in rows]
            powers = [float(r["power"]) for r in rows]
            sub = Instance.build(inst.metric, inst.params, pairs)
            rep = check_feasible(sub, range(len(rows)), dict(enumerate(powers)), rtol=rtol)
        except (KeyError, TypeError, ValueError) as exc:
            problems.append(f"{key}[{g}]: unusable entry ({exc})")
            continue
        for j in rep.violations:
            problems.append(f"{key}[{g}]: link {rows[j]['id']} ({pairs[j][0]}->{pairs[j][1]}) violates SINR, "
                            f"margin {rep.margins[j]:.6g}")
        for j, row in enumerate(rows):
            claimed = row.get("margin")
            if claimed is None or abs(float(claimed) - rep.margins[j]) > rtol * rep.signals[j]:
                problems.append(f"{key}[{g}]: link {row['id']} reported margin {claimed} != recomputed "
                                f"{rep.margins[j]:.17g}")

    if command in ("capacity", "schedule"):
        seen = [r["id"] for group in groups for r in group["links"]] + list(report.get("discarded", []))
        for r_id, pair in _pairs_by_id(groups).items():
            if not 0 <= r_id < len(inst) or (inst.requests[r_id].sender, inst.requests[r_id].receiver) != pair:
                problems.append(f"link {r_id} does not match the instance's request")
        if sorted(seen) != list(range(len(inst))):
            problems.append("channels/slots and discarded links do not partition the request set")
    if command in ("multihop", "route"):
        if command == "multihop":
            problems.extend(_check_precedence(report, paths, None))
        else:
            problems.extend(_check_precedence(report, None, routing))
    return Verdict(not problems, problems)


def _pairs_by_id(groups) -> dict[int, tuple[int, int]]:
    return {int(r["id"]): (int(r["sender"]), int(r["receiver"])) for g in groups for r in g["links"]}


def _check_precedence(report: dict, paths: MultiHopRequest | None, routing: RoutingProblem | None) -> list[str]:
    problems = []
    chosen = report.get("paths")
    if chosen is None:
        chosen = [list(p) for p in paths.paths] if paths is not None else None
    if chosen is None:
        return ["report has no paths to check precedence against"]
    if paths is not None and [list(p) for p in paths.paths] != [list(p) for p in chosen]:
        problems.append("reported paths differ from the instance's paths")
    if routing is not None:
        edge_set = set(routing.edges)
        for i, p in enumerate(chosen):
            s, t = routing.commodities[i]
            if p[0] != s or p[-1] != t:
                problems.append(f"path {i} does not connect commodity {i}")
            for a, b in zip(p, p[1:]):
                if (a, b) not in edge_set:
                    problems.append(f"path {i} uses ({a},{b}), which is not an edge")
        if len(chosen) != len(routing.commodities):
            problems.append("one path per commodity expected")
    slot_of = {}
    for t, group in enumerate(report["slots"]):
        for row in group["links"]:
            hop = tuple(row["hop"])
            if hop in slot_of:
                problems.append(f"hop {hop} scheduled twice")
            slot_of[hop] = t
            i, j = hop
            if not (0 <= i < len(chosen) and 0 <= j < len(chosen[i]) - 1) or \
                    (chosen[i][j], chosen[i][j + 1]) != (row["sender"], row["receiver"]):
                problems.append(f"slot entry {hop} does not match path {i}")
    for i, p in enumerate(chosen):
        for j in range(len(p) - 1):
            if (i, j) not in slot_of:
                problems.append(f"hop ({i},{j}) never scheduled")
            elif j > 0 and (i, j - 1) in slot_of and slot_of[(i, j - 1)] >= slot_of[(i, j)]:
                problems.append(f"hop ({i},{j}) scheduled before or with hop ({i},{j - 1})")
    return problems
