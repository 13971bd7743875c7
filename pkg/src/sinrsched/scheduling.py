"""Single-hop scheduling by repeated first fit, and multi-hop scheduling with random delays."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .capacity import FeasibilityViolation, assign_powers, first_fit
from .model import FeasibilityReport, Instance, InputError, PowerAssignment, check_feasible
from .weights import WeightGraph, tau as default_tau


class SlotBoundExceeded(RuntimeError):
    pass


@dataclass
class Schedule:
    slots: list[list[int]]
    powers: list[PowerAssignment] = field(default_factory=list)
    reports: list[FeasibilityReport] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.slots)


def slot_bound(total_weight: float, threshold: float, n: int) -> int:
    """Largest slot count the first-fit scheduler may use on ``n`` links.

    The unscheduled count shrinks by a factor ``1 - 1/(W/threshold + 1)`` per
    slot, so it drops below one after ``(W/threshold + 1) ln n`` slots.
    """
    if n <= 0:
        return 0
    if n == 1:
        return 1
    return math.floor((total_weight / threshold + 1.0) * math.log(n)) + 1


def _power_slots(instance: Instance, slots: list[list[int]]) -> Schedule:
    out = Schedule(slots)
    for t, slot in enumerate(slots):
        powers = assign_powers(instance, slot)
        report = check_feasible(instance, slot, powers)
        if not report.feasible:
            raise FeasibilityViolation(t, report)
        out.powers.append(powers)
        out.reports.append(report)
    return out


def schedule_single_hop(instance: Instance, threshold: float | None = None,
                        links: Sequence[int] | None = None, graph: WeightGraph | None = None) -> Schedule:
    """Schedule every link (or just ``links``) into as few first-fit slots as the greedy rule gives."""
    if threshold is None:
        threshold = default_tau(instance.params)
    graph = graph or WeightGraph(instance)
    pool = list(range(len(instance))) if links is None else instance.check_links(links)
    slots, _ = first_fit(graph, threshold, pool)
    bound = slot_bound(graph.max_weight(pool, probes=pool), threshold, len(pool))
    if len(slots) > bound:
        raise SlotBoundExceeded(f"{len(slots)} slots used, bound is {bound}")
    return _power_slots(instance, slots)


@dataclass(frozen=True)
class MultiHopRequest:
    paths: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        paths = tuple(tuple(int(v) for v in p) for p in self.paths)
        for p in paths:
            if len(p) < 2:
                raise InputError("every path needs at least two nodes")
            if any(a == b for a, b in zip(p, p[1:])):
                raise InputError("consecutive path nodes must differ")
        object.__setattr__(self, "paths", paths)

    def hops(self) -> list[tuple[int, int]]:
        """``(i, j)`` for every hop, packet-major; this is the hop-link index order."""
        return [(i, j) for i, p in enumerate(self.paths) for j in range(len(p) - 1)]

    def hop_instance(self, base: Instance) -> Instance:
        pairs = [(self.paths[i][j], self.paths[i][j + 1]) for i, j in self.hops()]
        return Instance.build(base.metric, base.params, pairs)


def dilation(request: MultiHopRequest) -> int:
    return max((len(p) - 1 for p in request.paths), default=0)


def delay_range(total_weight: float, n: int) -> int:
    """Delays are drawn from ``1..K`` with ``K = max(1, ceil(W / (3 ln n)))``."""
    if n < 2:
        return 1
    return max(1, math.ceil(total_weight / (3.0 * math.log(n))))


@dataclass
class MultiHopSchedule:
    hop_links: Instance
    hops: list[tuple[int, int]]
    slots: list[list[int]]
    powers: list[PowerAssignment]
    reports: list[FeasibilityReport]
    hop_slot: dict[tuple[int, int], int]
    delays: list[int]
    delay_bound: int
    super_slots: list[int]  # single-hop schedule length of each super-slot, in order

    @property
    def length(self) -> int:
        return len(self.slots)


def schedule_multi_hop(instance: Instance, request: MultiHopRequest, seed: int,
                       threshold: float | None = None) -> MultiHopSchedule:
    """Schedule packets along fixed paths.

    Each packet waits a random delay, hop ``j`` of packet ``i`` joins super-slot
    ``delay_i + j``, each super-slot is scheduled by the single-hop algorithm,
    and the super-slot schedules are concatenated. Only ``instance``'s metric
    and parameters are used; slot entries index ``request.hops()``.
    """
    if threshold is None:
        threshold = default_tau(instance.params)
    hop_links = request.hop_instance(instance)
    hops = request.hops()
    graph = WeightGraph(hop_links)
    n = len(hops)
    total = graph.max_weight(range(n))
    k = delay_range(total, n)
    rng = np.random.default_rng(seed)
    delays = [int(x) for x in rng.integers(1, k + 1, size=len(request.paths))]

    groups: dict[int, list[int]] = {}
    for h, (i, j) in enumerate(hops):
        groups.setdefault(delays[i] + j, []).append(h)

    slots, powers, reports, lengths = [], [], [], []
    hop_slot = {}
    for t in range(min(groups, default=0), max(groups, default=-1) + 1):
        members = groups.get(t, [])
        sub = schedule_single_hop(hop_links, threshold, members, graph) if members else Schedule([])
        for slot, p, rep in zip(sub.slots, sub.powers, sub.reports):
            for h in slot:
                hop_slot[hops[h]] = len(slots)
            slots.append(slot)
            powers.append(p)
            reports.append(rep)
        lengths.append(sub.length)
    return MultiHopSchedule(hop_links, hops, slots, powers, reports, hop_slot, delays, k, lengths)
