"""Path selection for multi-hop traffic: flow LP, path decomposition, pruning, rounding."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass

import numpy as np

from .model import Instance, InputError
from .scheduling import MultiHopRequest, MultiHopSchedule, dilation, schedule_multi_hop
from .simplex import LinearProgram, LPSolution, solve_lp
from .weights import WeightGraph

FLOW_TOL = 1e-9
_ZERO = 1e-12


@dataclass(frozen=True)
class RoutingProblem:
    edges: tuple[tuple[int, int], ...]
    commodities: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        commodities = tuple((int(s), int(t)) for s, t in self.commodities)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "commodities", commodities)
        for u, v in edges:
            if u == v:
                raise InputError(f"edge ({u},{v}) is a self-loop")
        succ = defaultdict(list)
        for u, v in edges:
            succ[u].append(v)
        for s, t in commodities:
            if s == t:
                raise InputError(f"commodity ({s},{t}) has identical endpoints")
            if t not in _reachable(succ, s):
                raise InputError(f"commodity ({s},{t}) has no path in the edge set")

    @property
    def nodes(self) -> list[int]:
        return sorted({v for e in self.edges for v in e} | {v for c in self.commodities for v in c})

    def edge_instance(self, base: Instance) -> Instance:
        """The edges as links (lengths from ``base``'s metric, ties broken by edge index)."""
        return Instance.build(base.metric, base.params, self.edges)


def _reachable(succ, source) -> set:
    seen, queue = {source}, deque([source])
    while queue:
        u = queue.popleft()
        for v in succ.get(u, ()):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


@dataclass
class RoutingLP:
    problem: RoutingProblem
    lp: LinearProgram
    edge_links: Instance
    weights: np.ndarray  # weights[l, e] = w(edge l, edge e)

    def y_index(self, i: int, e: int) -> int:
        return i * len(self.problem.edges) + e

    @property
    def z_index(self) -> int:
        return len(self.problem.commodities) * len(self.problem.edges)


def build_routing_lp(instance: Instance, problem: RoutingProblem) -> RoutingLP:
    """Relaxed path-selection LP: minimize ``z`` bounding both path length and interference load.

    Variables are ``y(i, e)`` in [0, 1] (commodity ``i`` uses edge ``e``) and ``z >= 0``.
    Constraints: unit net outflow at each source, conservation at every other
    node except the sink, ``sum_e y(i, e) <= z`` per commodity, and
    ``sum_i sum_e w(l, e) y(i, e) <= z`` for every edge ``l`` used as a probe.
    """
    edges, comms = problem.edges, problem.commodities
    n_e, m = len(edges), len(comms)
    edge_links = problem.edge_instance(instance)
    w = WeightGraph(edge_links).table if n_e else np.zeros((0, 0))
    n_var = m * n_e + 1
    z = n_var - 1

    eq_rows, eq_rhs = [], []
    for i, (s, t) in enumerate(comms):
        for v in problem.nodes:
            if v == t:
                continue
            row = np.zeros(n_var)
            for e, (a, b) in enumerate(edges):
                if a == v:
                    row[i * n_e + e] += 1.0
                if b == v:
                    row[i * n_e + e] -= 1.0
            if row.any() or v == s:
                eq_rows.append(row)
                eq_rhs.append(1.0 if v == s else 0.0)

    ub_rows, ub_rhs = [], []
    for i in range(m):
        row = np.zeros(n_var)
        row[i * n_e:(i + 1) * n_e] = 1.0
        row[z] = -1.0
        ub_rows.append(row)
        ub_rhs.append(0.0)
    for probe in range(n_e):
        if not w[probe].any():
            continue
        row = np.zeros(n_var)
        for i in range(m):
            row[i * n_e:(i + 1) * n_e] = w[probe]
        row[z] = -1.0
        ub_rows.append(row)
        ub_rhs.append(0.0)

    c = np.zeros(n_var)
    c[z] = 1.0
    upper = np.ones(n_var)
    upper[z] = np.inf
    lp = LinearProgram(
        c,
        A_ub=np.array(ub_rows) if ub_rows else None, b_ub=np.array(ub_rhs) if ub_rows else None,
        A_eq=np.array(eq_rows) if eq_rows else None, b_eq=np.array(eq_rhs) if eq_rows else None,
        lower=np.zeros(n_var), upper=upper,
    )
    return RoutingLP(problem, lp, edge_links, w)


@dataclass
class FractionalFlow:
    problem: RoutingProblem
    y: np.ndarray  # shape (commodities, edges)
    z: float

    @classmethod
    def from_solution(cls, rlp: RoutingLP, sol: LPSolution) -> "FractionalFlow":
        m, n_e = len(rlp.problem.commodities), len(rlp.problem.edges)
        y = sol.x[: m * n_e].reshape(m, n_e) if m else np.zeros((0, n_e))
        return cls(rlp.problem, np.clip(y, 0.0, 1.0), float(sol.x[rlp.z_index]))

    def balance(self, i: int) -> dict[int, float]:
        """Net outflow of commodity ``i`` at every node."""
        out = defaultdict(float)
        for e, (a, b) in enumerate(self.problem.edges):
            out[a] += self.y[i, e]
            out[b] -= self.y[i, e]
        return dict(out)

    def conservation_residual(self, i: int) -> float:
        s, t = self.problem.commodities[i]
        worst = 0.0
        for v, net in self.balance(i).items():
            want = 1.0 if v == s else -1.0 if v == t else 0.0
            worst = max(worst, abs(net - want))
        return worst


@dataclass(frozen=True)
class WeightedPath:
    nodes: tuple[int, ...]
    edges: tuple[int, ...]
    weight: float

    @property
    def hops(self) -> int:
        return len(self.edges)


@dataclass
class Decomposition:
    paths: list[WeightedPath]
    cycles: list[WeightedPath]  # circulations carrying no throughput; dropped by the pipeline


def decompose_flow(flow: FractionalFlow, i: int) -> Decomposition:
    """Peel source-to-sink paths off commodity ``i``'s flow, each carrying its bottleneck amount.

    Walks always follow the positive-flow edge to the smallest next node. A
    walk that closes a cycle cancels that cycle instead. An all-zero flow
    decomposes into nothing.
    """
    if not np.any(flow.y[i] > _ZERO):
        return Decomposition([], [])
    if flow.conservation_residual(i) > FLOW_TOL:
        raise InputError(f"flow of commodity {i} violates conservation")
    edges = flow.problem.edges
    s, t = flow.problem.commodities[i]
    resid = flow.y[i].astype(float).copy()
    resid[resid <= _ZERO] = 0.0
    out_edges = defaultdict(list)
    for e, (a, b) in enumerate(edges):
        out_edges[a].append(e)
    for a in out_edges:
        out_edges[a].sort(key=lambda e: (edges[e][1], e))

    paths: dict[tuple[int, ...], list] = {}
    cycles: list[WeightedPath] = []

    def next_edge(v):
        return next((e for e in out_edges.get(v, ()) if resid[e] > _ZERO), None)

    def peel(route):
        amount = min(resid[e] for e in route)
        for e in route:
            resid[e] -= amount
            if resid[e] <= _ZERO:
                resid[e] = 0.0
        return amount

    def walk(start, stop):
        """Follow flow from ``start``; returns ('path', edges) or ('cycle', edges) or None."""
        nodes, route, seen = [start], [], {start: 0}
        v = start
        while v != stop:
            e = next_edge(v)
            if e is None:
                return None
            v = edges[e][1]
            route.append(e)
            if v in seen:
                return "cycle", route[seen[v]:]
            seen[v] = len(route)
            nodes.append(v)
        return "path", route

    for _ in range(4 * len(edges) + 4):
        throughput = sum(resid[e] for e in out_edges.get(s, ())) - sum(
            resid[e] for e, (a, b) in enumerate(edges) if b == s)
        if throughput <= FLOW_TOL:
            break
        found = walk(s, t)
        if found is None:
            break
        kind, route = found
        amount = peel(route)
        record = WeightedPath(_route_nodes(edges, route), tuple(route), amount)
        if kind == "cycle":
            cycles.append(record)
        else:
            key = record.edges
            paths.setdefault(key, [record.nodes, 0.0])[1] += amount

    # whatever is left circulates
    for _ in range(len(edges) + 1):
        start = next((e for e in range(len(edges)) if resid[e] > _ZERO), None)
        if start is None:
            break
        found = walk(edges[start][0], None)
        if found is None or found[0] != "cycle":
            resid[start] = 0.0
            continue
        route = found[1]
        cycles.append(WeightedPath(_route_nodes(edges, route), tuple(route), peel(route)))

    out = [WeightedPath(nodes, key, w) for key, (nodes, w) in paths.items()]
    out.sort(key=lambda p: (p.nodes, p.edges))
    return Decomposition(out, cycles)


def _route_nodes(edges, route) -> tuple[int, ...]:
    return (edges[route[0]][0],) + tuple(edges[e][1] for e in route)


def prune_paths(paths: list[WeightedPath], z_star: float) -> list[WeightedPath]:
    """Drop paths with more than ``2 z*`` hops and rescale the survivors to total weight 1."""
    total = sum(p.weight for p in paths)
    if abs(total - 1.0) > FLOW_TOL:
        raise InputError(f"path weights sum to {total}, expected 1")
    keep = [p for p in paths if p.hops <= 2.0 * z_star + FLOW_TOL]
    if not keep:
        raise RuntimeError("every path exceeds 2 z*; the LP solution is inconsistent")
    kept = sum(p.weight for p in keep)
    return [WeightedPath(p.nodes, p.edges, p.weight / kept) for p in keep]


def round_paths(path_sets: list[list[WeightedPath]], seed) -> list[WeightedPath]:
    """Pick one path per commodity, independently, with probability proportional to its weight."""
    rng = np.random.default_rng(seed)
    chosen = []
    for paths in path_sets:
        if not paths:
            raise InputError("a commodity has no candidate path")
        w = np.array([p.weight for p in paths], dtype=float)
        chosen.append(paths[int(rng.choice(len(paths), p=w / w.sum()))])
    return chosen


@dataclass
class ClmResult:
    paths: list[WeightedPath]
    schedule: MultiHopSchedule
    z_star: float
    dilation: int
    flow: FractionalFlow
    candidates: list[list[WeightedPath]]

    @property
    def length(self) -> int:
        return self.schedule.length


def solve_clm(instance: Instance, problem: RoutingProblem, seed: int, threshold: float | None = None) -> ClmResult:
    """Choose one path per commodity and schedule the resulting multi-hop traffic."""
    rlp = build_routing_lp(instance, problem)
    sol = solve_lp(rlp.lp)
    flow = FractionalFlow.from_solution(rlp, sol)
    candidates = []
    for i in range(len(problem.commodities)):
        candidates.append(prune_paths(decompose_flow(flow, i).paths, flow.z))
    round_seed, delay_seed = np.random.SeedSequence(seed).spawn(2)
    chosen = round_paths(candidates, round_seed)
    request = MultiHopRequest(tuple(p.nodes for p in chosen))
    schedule = schedule_multi_hop(instance, request, delay_seed, threshold)
    return ClmResult(chosen, schedule, flow.z, dilation(request), flow, candidates)
