"""Seeded random instances."""

from __future__ import annotations

import numpy as np

from .model import Instance, InputError, InstanceParams, MetricSpace

KINDS = ("line", "uniform-square", "clustered")


def random_instance(kind: str, n: int, rng: np.random.Generator, params: InstanceParams | None = None,
                    side: float = 100.0, min_length: float = 1.0, max_length: float = 10.0) -> Instance:
    """``n`` links with their own 2n endpoints; link ``i`` is node ``2i`` -> node ``2i+1``."""
    if n < 0:
        raise InputError("n must be >= 0")
    if not 0 < min_length <= max_length:
        raise InputError("need 0 < min-length <= max-length")
    params = params or InstanceParams()
    lengths = rng.uniform(min_length, max_length, size=n)
    if kind == "line":
        senders = rng.uniform(0.0, side, size=(n, 1))
        receivers = senders + np.where(rng.random(n) < 0.5, -1.0, 1.0)[:, None] * lengths[:, None]
    elif kind in ("uniform-square", "clustered"):
        if kind == "uniform-square":
            senders = rng.uniform(0.0, side, size=(n, 2))
        else:
            centers = rng.uniform(0.0, side, size=(max(1, n // 5), 2))
            which = rng.integers(0, len(centers), size=n)
            senders = centers[which] + rng.normal(0.0, side / 20.0, size=(n, 2))
        angle = rng.uniform(0.0, 2 * np.pi, size=n)
        receivers = senders + lengths[:, None] * np.column_stack([np.cos(angle), np.sin(angle)])
    else:
        raise InputError(f"unknown instance kind {kind!r}")
    dim = senders.shape[1]
    points = np.empty((2 * n, dim))
    points[0::2], points[1::2] = senders, receivers
    return Instance.build(MetricSpace.euclidean(points), params, [(2 * i, 2 * i + 1) for i in range(n)])


def random_paths(metric: MetricSpace, count: int, max_hops: int, rng: np.random.Generator,
                 neighbours: int = 4) -> list[list[int]]:
    """Short random walks that step to one of each node's nearest unvisited neighbours."""
    size = metric.size
    if size < 2:
        raise InputError("need at least two nodes for a path")
    dist = metric.cross(range(size), range(size))
    near = np.argsort(dist, axis=1, kind="stable")[:, 1:neighbours + 1]
    walks = []
    for _ in range(count):
        walk = [int(rng.integers(0, size))]
        for _ in range(int(rng.integers(1, max_hops + 1))):
            options = [int(u) for u in near[walk[-1]] if int(u) not in walk]
            if not options:
                break
            walk.append(options[int(rng.integers(0, len(options)))])
        if len(walk) < 2:
            walk.append(int(near[walk[0]][0]))
        walks.append(walk)
    return walks


def knn_edges(metric: MetricSpace, k: int = 3) -> list[tuple[int, int]]:
    """Directed edges both ways between every node and its ``k`` nearest neighbours."""
    size = metric.size
    dist = metric.cross(range(size), range(size))
    near = np.argsort(dist, axis=1, kind="stable")[:, 1:k + 1]
    pairs = {(u, int(v)) for u in range(size) for v in near[u]}
    return sorted(pairs | {(v, u) for u, v in pairs})


def random_commodities(edges, count: int, rng: np.random.Generator, nodes: int) -> list[tuple[int, int]]:
    succ: dict[int, list[int]] = {}
    for u, v in edges:
        succ.setdefault(u, []).append(v)
    out = []
    for _ in range(100 * count):
        if len(out) == count:
            break
        s, t = (int(x) for x in rng.choice(nodes, size=2, replace=False))
        if _reaches(succ, s, t):
            out.append((s, t))
    return out


def _reaches(succ, s, t) -> bool:
    seen, stack = {s}, [s]
    while stack:
        u = stack.pop()
        if u == t:
            return True
        for v in succ.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return False


def grid(width: int, height: int, spacing: float = 1.0) -> tuple[MetricSpace, list[tuple[int, int]]]:
    """Grid points (node ``y * width + x``) with directed edges both ways between 4-neighbours."""
    pts = [(x * spacing, y * spacing) for y in range(height) for x in range(width)]
    edges = []
    for y in range(height):
        for x in range(width):
            u = y * width + x
            if x + 1 < width:
                edges += [(u, u + 1), (u + 1, u)]
            if y + 1 < height:
                edges += [(u, u + width), (u + width, u)]
    return MetricSpace.euclidean(pts), sorted(edges)


def plane_suite(count: int, seed: int, max_links: int = 10, params: InstanceParams | None = None,
                side: float = 10.0, min_length: float = 0.5, max_length: float = 3.0) -> list[Instance]:
    """``count`` small, dense plane instances with 2..``max_links`` links each."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, max_links + 1))
        out.append(random_instance("uniform-square", n, rng, params, side, min_length, max_length))
    return out
